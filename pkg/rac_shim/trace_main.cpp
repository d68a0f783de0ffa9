// Trace driver for the emitted set corpus.
//
// Reads an op script from stdin (one op per line: `add <v>` | `del <v>` |
// `is <v>`), applies each op to a fresh set, and prints one trace line per
// event:
//
//   <seq> <op> <v> <ret|-> <len> <len_free> <digest-hex16>
//
// The digest is 64-bit FNV-1a over 8-byte little-endian words: the used-chain
// values head to terminator, then the free-chain length. This matches the
// reference harness byte for byte.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#ifndef RAC_GENERATED_SOURCE
#define RAC_GENERATED_SOURCE "arrayset.cpp"
#endif
#include RAC_GENERATED_SOURCE

static uint64_t fnv1a64_word(uint64_t h, uint64_t w) {
  for (int i = 0; i < 8; i++) {
    h = (h ^ ((w >> (8 * i)) & 0xffu)) * 0x100000001b3ULL;
  }
  return h;
}

static uint64_t state_digest(const Arrayset &aset) {
  uint64_t h = 0xcbf29ce484222325ULL;
  uint curr = aset.used_head;
  for (uint step = 0; step < ARR_SZ && curr < ARR_SZ; step++) {
    h = fnv1a64_word(h, static_cast<uint64_t>(aset.avals[curr]));
    curr = aset.anext[curr];
  }
  h = fnv1a64_word(h, static_cast<uint64_t>(aset_len_free(aset)));
  return h;
}

int main(int argc, char **argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: trace_main <capacity>\n");
    return 2;
  }
  long capacity = std::strtol(argv[1], nullptr, 10);
  if (capacity != static_cast<long>(ARR_SZ)) {
    std::fprintf(stderr, "capacity %ld does not match compiled ARR_SZ %u\n",
                 capacity, static_cast<unsigned>(ARR_SZ));
    return 2;
  }

  Arrayset aset{};
  aset = aset_init(aset);

  std::string line;
  uint64_t seq = 0;
  std::size_t line_no = 0;
  while (std::getline(std::cin, line)) {
    line_no++;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::istringstream in(line);
    std::string op;
    long long val = 0;
    std::string extra;
    if (!(in >> op >> val) || (in >> extra) ||
        (op != "add" && op != "del" && op != "is")) {
      std::fprintf(stderr, "line %zu: malformed op: %s\n", line_no, line.c_str());
      return 1;
    }
    seq++;
    const char *ret = "-";
    if (op == "add") {
      aset = aset_add(static_cast<si64>(val), aset);
    } else if (op == "del") {
      aset = aset_del(static_cast<si64>(val), aset);
    } else {
      ret = aset_is_element(static_cast<si64>(val), aset) ? "true" : "false";
    }
    std::printf("%" PRIu64 " %s %lld %s %u %u %016" PRIx64 "\n", seq, op.c_str(),
                val, ret, static_cast<unsigned>(aset_len(aset)),
                static_cast<unsigned>(aset_len_free(aset)), state_digest(aset));
  }
  return 0;
}
