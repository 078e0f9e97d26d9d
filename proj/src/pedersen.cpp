#include "investcoin/pedersen.hpp"

namespace investcoin {

Commitment Commit(const GroupParams& params, const CommitKey& key, const mpz_class& x,
                  const mpz_class& r) {
  return Commitment{
      Mul(params, Pow(params, key.h1, params.exp(x)), Pow(params, key.h2, params.exp(r)))};
}

bool Unv(const GroupParams& params, const CommitKey& key, const Commitment& com,
         const mpz_class& x, const mpz_class& r) {
  return Commit(params, key, x, r) == com;
}

Commitment Combine(const GroupParams& params, std::span<const WeightedCommitment> coms) {
  GroupElement acc = Identity();
  for (const auto& [com, weight] : coms) {
    acc = Mul(params, acc, Pow(params, com.com, weight));
  }
  return Commitment{acc};
}

mpz_class SampleCommitRandomness(const GroupParams& params, RandomnessRange range, Drbg& rng) {
  switch (range) {
    case RandomnessRange::kInvestmentRange:
      return rng.UniformIn(0, params.m);
    case RandomnessRange::kFull:
      return rng.UniformBelow(params.exp_modulus);
  }
  return 0;
}

}  // namespace investcoin
