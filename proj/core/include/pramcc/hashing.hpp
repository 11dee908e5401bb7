#pragma once

#include <cstdint>

#include "pramcc/rng.hpp"

namespace pramcc {

/// Smallest prime strictly greater than `n`.
std::uint64_t next_prime_above(std::uint64_t n);

/// Pairwise-independent hash x -> ((a*x + b) mod p) mod K. Two words of
/// state plus the range; immutable after construction, so concurrent
/// evaluation needs no coordination.
struct HashFn {
  std::uint64_t a = 1;
  std::uint64_t b = 0;
  std::uint64_t p = 2;
  std::uint64_t range = 1;

  std::uint64_t eval(std::uint64_t x) const {
    return ((a * x + b) % p) % range;
  }

  /// Same (a, b, p) pair reduced to a different table size.
  HashFn with_range(std::uint64_t k) const { return HashFn{a, b, p, k}; }
};

/// Draw a fresh function for the given id universe and table size: p is the
/// smallest prime above the universe, a uniform in [1, p), b in [0, p).
HashFn sample_hash(std::uint64_t universe, std::uint64_t range,
                   SeedStream& rng);

}  // namespace pramcc
