#pragma once

#include <cstdint>

namespace rrw {

inline constexpr std::uint64_t kSeedConstant = 0x9E3779B97F4A7C15ULL;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += kSeedConstant;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// per-replica seed: two rounds of splitmix64 over (master, index)
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ (index * kSeedConstant + 1));
}

}  // namespace rrw
