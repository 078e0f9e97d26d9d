#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "investcoin/group.hpp"

namespace investcoin {

struct PsaKey {
  Exponent s;
};

struct PsaCiphertext {
  GroupElement c;
  std::string tag;

  friend bool operator==(const PsaCiphertext& a, const PsaCiphertext& b) {
    return a.c == b.c && a.tag == b.tag;
  }
};

// c = (1 + p x) * H(tag)^s mod p^2. Accepts any signed x; range policy
// belongs to the caller.
PsaCiphertext PsaEnc(const GroupParams& params, const OracleTable& oracle, const PsaKey& key,
                     std::string_view tag, const mpz_class& x);

// Same as PsaEnc with H(tag) already evaluated.
GroupElement PsaEncWithBase(const GroupParams& params, const GroupElement& base, const PsaKey& key,
                            const mpz_class& x);

// Decodes V = 1 + p S (mod p^2) to the centered S in (-p/2, p/2).
// Throws kMalformedAggregate if V != 1 mod p and kSumOutOfBound if |S| > bound.
mpz_class ExtractSum(const GroupParams& params, const GroupElement& aggregate,
                     const mpz_class& bound);

// V = H(tag)^s * prod c_i, then ExtractSum. Every cipher must carry `tag`.
mpz_class PsaDec(const GroupParams& params, const OracleTable& oracle, const PsaKey& key,
                 std::string_view tag, std::span<const PsaCiphertext> ciphers,
                 const mpz_class& bound);

// The key s_0 that completes a zero-sum key set: -sum s_i mod pq.
PsaKey KeysetComplement(const GroupParams& params, std::span<const PsaKey> keys);

}  // namespace investcoin
