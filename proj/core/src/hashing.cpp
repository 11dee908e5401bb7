#include "pramcc/hashing.hpp"

#include <stdexcept>

namespace pramcc {

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t f = 3; f * f <= n; f += 2) {
    if (n % f == 0) return false;
  }
  return true;
}

}  // namespace

std::uint64_t next_prime_above(std::uint64_t n) {
  std::uint64_t candidate = n + 1;
  while (!is_prime(candidate)) ++candidate;
  return candidate;
}

HashFn sample_hash(std::uint64_t universe, std::uint64_t range,
                   SeedStream& rng) {
  if (universe < 1 || range < 1) {
    throw std::invalid_argument("sample_hash: universe and range must be >= 1");
  }
  std::uint64_t p = next_prime_above(universe);
  std::uint64_t a = 1 + rng.next_below(p - 1);
  std::uint64_t b = rng.next_below(p);
  return HashFn{a, b, p, range};
}

}  // namespace pramcc
