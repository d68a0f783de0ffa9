#ifndef RAC_USE_VIVADO_HLS
#define RAC_USE_VIVADO_HLS 1
#endif
typedef unsigned int uint;
#if defined(RAC_USE_VIVADO_HLS)
#include "ap_int.h"
typedef ap_int<8> si8;
typedef ap_int<16> si16;
typedef ap_int<32> si32;
typedef ap_int<64> si64;
typedef ap_uint<8> ui8;
typedef ap_uint<16> ui16;
typedef ap_uint<32> ui32;
typedef ap_uint<64> ui64;
#else
#include "ac_int.h"
typedef ac_int<8, true> si8;
typedef ac_int<16, true> si16;
typedef ac_int<32, true> si32;
typedef ac_int<64, true> si64;
typedef ac_int<8, false> ui8;
typedef ac_int<16, false> ui16;
typedef ac_int<32, false> ui32;
typedef ac_int<64, false> ui64;
#endif

template <typename T, unsigned N>
struct array {
  T elem[N];
  T &operator[](uint i) { return elem[i]; }
  const T &operator[](uint i) const { return elem[i]; }
};

const uint ARR_SZ = 256;

struct Arrayset {
  array<uint, ARR_SZ> anext;
  array<si64, ARR_SZ> avals;
  uint free_head;
  uint used_head;
};

Arrayset aset_init(Arrayset aset) {
  for (uint i = 0; i < ARR_SZ; i++) {
    aset.anext[i] = i + 1;
    aset.avals[i] = 0;
  }
  aset.free_head = 0;
  aset.used_head = ARR_SZ;
  return aset;
}

bool aset_is_element(si64 val, Arrayset aset) {
  uint curr_index = aset.used_head;
  bool found = false;
  for (uint _i = 0; _i < ARR_SZ; _i++) {
    if (curr_index < ARR_SZ) {
      if (aset.avals[curr_index] == val) {
        found = true;
      }
      curr_index = aset.anext[curr_index];
    }
  }
  return found;
}

Arrayset aset_add(si64 val, Arrayset aset) {
  uint curr_index = aset.free_head;
  if (curr_index >= ARR_SZ) {
    return aset;
  } else {
    if (aset.used_head < ARR_SZ && aset_is_element(val, aset)) {
      return aset;
    } else {
      aset.free_head = aset.anext[aset.free_head];
      aset.avals[curr_index] = val;
      aset.anext[curr_index] = aset.used_head;
      aset.used_head = curr_index;
      return aset;
    }
  }
}

uint aset_element_prev_from(uint start, si64 val, Arrayset aset) {
  uint previ = start;
  uint result = ARR_SZ;
  for (uint _i = 0; _i < ARR_SZ; _i++) {
    if (previ < ARR_SZ && result >= ARR_SZ) {
      if (aset.anext[previ] < ARR_SZ && aset.avals[aset.anext[previ]] == val) {
        result = previ;
      } else {
        previ = aset.anext[previ];
      }
    }
  }
  return result;
}

Arrayset aset_del(si64 val, Arrayset aset) {
  uint curr_index = aset.used_head;
  if (aset.used_head >= ARR_SZ) {
    return aset;
  } else {
    if (aset.avals[curr_index] == val) {
      aset.used_head = aset.anext[curr_index];
      aset.anext[curr_index] = aset.free_head;
      aset.free_head = curr_index;
      return aset;
    } else {
      uint prev_index = aset_element_prev_from(aset.used_head, val, aset);
      if (prev_index >= ARR_SZ) {
        return aset;
      } else {
        curr_index = aset.anext[prev_index];
        if (curr_index >= ARR_SZ) {
          return aset;
        } else {
          aset.anext[prev_index] = aset.anext[curr_index];
          aset.anext[curr_index] = aset.free_head;
          aset.free_head = curr_index;
          return aset;
        }
      }
    }
  }
}

uint aset_len(Arrayset aset) {
  uint curr_index = aset.used_head;
  uint count = 0;
  for (uint _i = 0; _i < ARR_SZ; _i++) {
    if (curr_index < ARR_SZ) {
      count = count + 1;
      curr_index = aset.anext[curr_index];
    }
  }
  return count;
}

uint aset_len_free(Arrayset aset) {
  uint curr_index = aset.free_head;
  uint count = 0;
  for (uint _i = 0; _i < ARR_SZ; _i++) {
    if (curr_index < ARR_SZ) {
      count = count + 1;
      curr_index = aset.anext[curr_index];
    }
  }
  return count;
}
