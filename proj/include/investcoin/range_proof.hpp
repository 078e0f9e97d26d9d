#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "investcoin/pedersen.hpp"
#include "investcoin/schedule.hpp"
#include "investcoin/sigma_or.hpp"

namespace investcoin {

// Proof that a commitment opens to some x in [0, 2^l - 1]: one commitment per
// bit, each with an OR proof that it commits to 0 or to 1.
struct RangeProof {
  std::vector<Commitment> bit_coms;
  std::vector<OrProof> bit_proofs;
};

enum class RangeFailure {
  kNone,
  kLengthMismatch,
  kNotMember,
  kRecombination,
  kBitProof,
};

const char* RangeFailureName(RangeFailure failure);

struct RangeVerdict {
  RangeFailure reason = RangeFailure::kNone;
  std::size_t bit = 0;  // offending bit for kNotMember / kBitProof

  bool accepted() const { return reason == RangeFailure::kNone; }
  explicit operator bool() const { return accepted(); }
};

// Per-bit randomness r^(k) with sum r^(k) 2^k = r (mod pq), plus OR nonces.
struct RangeWitness {
  std::vector<mpz_class> bit_randomness;
  std::vector<OrNonces> nonces;
};

RangeWitness SampleRangeWitness(const GroupParams& params, const mpz_class& r, unsigned l,
                                Drbg& rng);

// Statement for bit commitment B: base h2, R = B (bit 0), S = B / h1 (bit 1).
OrStatement BitStatement(const GroupParams& params, const CommitKey& key, const Commitment& bit_com);

// Fiat-Shamir context for bit k: one digest over the target commitment, the
// full bit-commitment vector and the caller context, then separated by k.
std::string BitContext(const GroupParams& params, const Commitment& com,
                       const std::vector<Commitment>& bit_coms, std::string_view context,
                       std::size_t k);

// Throws ProtocolError(kOutOfRange) unless 0 <= x <= 2^l - 1.
RangeProof RangeProve(const GroupParams& params, const CommitKey& key, const mpz_class& x,
                      const mpz_class& r, unsigned l, std::string_view context, Drbg& rng,
                      Schedule schedule = Schedule::kSerial);
RangeProof RangeProve(const GroupParams& params, const CommitKey& key, const mpz_class& x,
                      unsigned l, const RangeWitness& witness, std::string_view context,
                      Schedule schedule = Schedule::kSerial);

RangeVerdict RangeVerify(const GroupParams& params, const CommitKey& key, const Commitment& com,
                         const RangeProof& proof, unsigned l, std::string_view context);

}  // namespace investcoin
