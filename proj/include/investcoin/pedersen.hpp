#pragma once

#include <span>
#include <utility>

#include <gmpxx.h>

#include "investcoin/group.hpp"
#include "investcoin/random.hpp"

namespace investcoin {

struct CommitKey {
  GroupElement h1;
  GroupElement h2;
};

inline CommitKey CommitKeyFrom(const GroupParams& params) { return {params.h1, params.h2}; }

struct Commitment {
  GroupElement com;

  friend bool operator==(const Commitment& a, const Commitment& b) { return a.com == b.com; }
  friend bool operator!=(const Commitment& a, const Commitment& b) { return !(a == b); }
};

// Openings are signed integers; the group only sees their residues mod pq.
struct Opening {
  mpz_class x;
  mpz_class r;
};

// h1^x * h2^r with both exponents reduced mod pq.
Commitment Commit(const GroupParams& params, const CommitKey& key, const mpz_class& x,
                  const mpz_class& r);

bool Unv(const GroupParams& params, const CommitKey& key, const Commitment& com,
         const mpz_class& x, const mpz_class& r);

using WeightedCommitment = std::pair<Commitment, mpz_class>;
// prod com_j^{e_j}; opens to (sum e_j x_j, sum e_j r_j).
Commitment Combine(const GroupParams& params, std::span<const WeightedCommitment> coms);

enum class RandomnessRange {
  kInvestmentRange,  // [0, m], the range the investment round uses
  kFull,             // [0, pq)
};

mpz_class SampleCommitRandomness(const GroupParams& params, RandomnessRange range, Drbg& rng);

}  // namespace investcoin
