#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sgcauc {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream keyed by (master, k0, k1, ...). Streams for distinct key
/// tuples are reproducible on their own, whatever order they are created in.
inline Rng make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t state = splitmix64(master);
  for (const std::uint64_t k : keys) state = splitmix64(state ^ splitmix64(k + 1));
  std::seed_seq seq{static_cast<std::uint32_t>(state), static_cast<std::uint32_t>(state >> 32)};
  return Rng(seq);
}

}  // namespace sgcauc
