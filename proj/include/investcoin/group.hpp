#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "investcoin/hash.hpp"

namespace investcoin {

// Element of Z*_{p^2}. Values produced by this library lie in QR_{p^2}, the
// cyclic subgroup of order pq; values received from other parties are only
// guaranteed to be in [0, p^2) and must be checked with IsMember().
struct GroupElement {
  mpz_class value{1};

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.value == b.value;
  }
  friend bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }
};

struct GroupParams;

// Residue modulo pq, stored as the canonical representative in [0, pq).
class Exponent {
 public:
  Exponent() = default;
  Exponent(const mpz_class& raw, const GroupParams& params);

  const mpz_class& value() const { return value_; }

  friend bool operator==(const Exponent& a, const Exponent& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Exponent& a, const Exponent& b) { return !(a == b); }

 private:
  mpz_class value_{0};
};

struct GroupParams {
  mpz_class q;
  mpz_class p;            // 2q + 1
  mpz_class modulus;      // p^2
  mpz_class exp_modulus;  // pq, the order of QR_{p^2}
  mpz_class m;            // 2^l - 1, the largest single investment
  mpz_class q_prime;      // bound on verification parameters and return factors
  unsigned l = 0;
  unsigned n = 0;
  unsigned lambda = 0;
  GroupElement h1;
  GroupElement h2;
  Bytes seed;

  // Canonical digest over every public field; binds Fiat-Shamir challenges
  // to one parameter set.
  Digest digest() const;

  Exponent exp(const mpz_class& raw) const { return Exponent(raw, *this); }
};

// Rebuilds parameters from their public fields and checks every invariant
// (safe prime, q > m n, q' < q/(m lambda), generator orders). Throws
// ProtocolError(kParameterConflict) on violation.
GroupParams MakeParams(const mpz_class& q, unsigned l, unsigned n, unsigned lambda,
                       const mpz_class& q_prime, const GroupElement& h1, const GroupElement& h2,
                       Bytes seed);

// Deterministic safe-prime search seeded by `seed`; derives h1, h2 from the
// hash oracle on reserved tags so nobody knows dlog_{h1}(h2).
GroupParams GenerateParams(unsigned q_bits, unsigned l, unsigned n, unsigned lambda,
                           std::string_view seed);

// p = 23, q = 11, l = 2, n = 3, lambda = 3.
GroupParams ToyParams();

// Largest integer strictly below q / (m lambda).
mpz_class DefaultQPrime(const mpz_class& q, const mpz_class& m, unsigned lambda);

class OracleTable {
 public:
  // Programming happens during setup only. Reprogramming a tag to a
  // different value throws, so a tag can never answer two ways.
  void Program(const std::string& tag, const GroupElement& value);

  std::optional<GroupElement> Programmed(std::string_view tag) const;
  bool IsProgrammed(std::string_view tag) const { return Programmed(tag).has_value(); }
  const std::map<std::string, GroupElement, std::less<>>& programmed() const { return programmed_; }

 private:
  std::map<std::string, GroupElement, std::less<>> programmed_;
};

// Programmed value if present, otherwise the square of a hash-derived residue.
GroupElement HashToGroup(const OracleTable& oracle, const GroupParams& params,
                         std::string_view tag);

// The unprogrammed branch of HashToGroup, exposed for generator derivation.
GroupElement HashToQr(const mpz_class& p, const mpz_class& modulus, std::string_view tag);

GroupElement Identity();
GroupElement Mul(const GroupParams& params, const GroupElement& a, const GroupElement& b);
GroupElement Inverse(const GroupParams& params, const GroupElement& g);
GroupElement Pow(const GroupParams& params, const GroupElement& g, const Exponent& e);
// Exact power in Z*_{p^2}; a negative exponent raises the inverse. Throws
// std::domain_error when g is not invertible and e < 0.
GroupElement Pow(const GroupParams& params, const GroupElement& g, const mpz_class& e);

using WeightedElement = std::pair<GroupElement, mpz_class>;
// prod g_i^{e_i} mod p^2 with exact signed exponents; empty product is 1.
GroupElement Product(const GroupParams& params, std::span<const WeightedElement> terms);

// g in [1, p^2), coprime to p, and g^{pq} = 1.
bool IsMember(const GroupParams& params, const GroupElement& g);
// IsMember and order exactly pq.
bool HasFullOrder(const GroupParams& params, const GroupElement& g);

}  // namespace investcoin
