// Minimal compatibility header so emitted plain-C++ output compiles and runs
// for differential testing. Integer aliases use native fixed-width types
// rather than bit-accurate templates: the corpus only uses 64-bit values and
// index arithmetic, where the two semantics coincide.
#ifndef RAC_SHIM_H
#define RAC_SHIM_H

#include <cassert>
#include <cstdint>

typedef unsigned int uint;

typedef int8_t si8;
typedef int16_t si16;
typedef int32_t si32;
typedef int64_t si64;

typedef uint8_t ui8;
typedef uint16_t ui16;
typedef uint32_t ui32;
typedef uint64_t ui64;

// Fixed-length array with value semantics: assignment copies all elements,
// matching by-value record passing. Out-of-range indexing traps in debug
// builds.
template <typename T, unsigned N>
struct array {
  T elem[N];

  T &operator[](uint i) {
    assert(i < N);
    return elem[i];
  }

  const T &operator[](uint i) const {
    assert(i < N);
    return elem[i];
  }
};

#endif  // RAC_SHIM_H
