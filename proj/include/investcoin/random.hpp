#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

#include <gmpxx.h>

#include "investcoin/hash.hpp"

namespace investcoin {

/// Deterministic SHA-256 counter-mode generator.
///
/// Each party in a simulation gets its own stream via Fork(label), so the
/// draws of one party never depend on how many draws another party made.
/// Not a vetted DRBG; it exists to make simulations reproducible from a seed.
class Drbg {
 public:
  using result_type = uint64_t;

  Drbg(std::span<const uint8_t> seed, std::string_view label);
  Drbg(std::string_view seed, std::string_view label);

  Drbg Fork(std::string_view label) const;
  Drbg Fork(std::string_view label, uint64_t index) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  mpz_class Bits(std::size_t bits);
  // Uniform in [0, bound). bound must be positive.
  mpz_class UniformBelow(const mpz_class& bound);
  // Uniform in [lo, hi], both inclusive.
  mpz_class UniformIn(const mpz_class& lo, const mpz_class& hi);
  // Uniform in [1, bound).
  mpz_class UniformNonZeroBelow(const mpz_class& bound);

 private:
  Drbg() = default;
  Digest NextBlock();

  Digest key_{};
  uint64_t counter_ = 0;
};

}  // namespace investcoin
