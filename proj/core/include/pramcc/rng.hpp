#pragma once

#include <cstdint>

namespace pramcc {

/// Counter-based pseudo-random streams. Every random decision in the
/// simulator (coin flips, hash-function samples, write arbitration) is
/// derived from a 64-bit key built out of the run seed and a handful of
/// context words, so any run replays bit-exactly from (seed, policy).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_key(std::uint64_t a) { return splitmix64(a); }

inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

template <typename... Rest>
std::uint64_t mix_key(std::uint64_t a, std::uint64_t b, Rest... rest) {
  return mix_key(mix_key(a, b), static_cast<std::uint64_t>(rest)...);
}

/// Sequential stream over a fixed key; used where a module needs several
/// draws in a row (hash sampling, compaction retries).
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t key) : state_(key) {}

  std::uint64_t next() { return splitmix64(state_++); }

  /// Uniform in [0, bound). Bound must be nonzero. Modulo bias is
  /// irrelevant at the bounds used here (always far below 2^32).
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

  /// True with the given probability.
  bool coin(double probability) {
    return static_cast<double>(next() >> 11) * 0x1.0p-53 < probability;
  }

 private:
  std::uint64_t state_;
};

}  // namespace pramcc
