#include "investcoin/range_proof.hpp"

#include "investcoin/errors.hpp"

namespace investcoin {

const char* RangeFailureName(RangeFailure failure) {
  switch (failure) {
    case RangeFailure::kNone: return "none";
    case RangeFailure::kLengthMismatch: return "length-mismatch";
    case RangeFailure::kNotMember: return "not-member";
    case RangeFailure::kRecombination: return "recombination";
    case RangeFailure::kBitProof: return "bit-proof";
  }
  return "unknown";
}

RangeWitness SampleRangeWitness(const GroupParams& params, const mpz_class& r, unsigned l,
                                Drbg& rng) {
  if (l == 0) {
    throw std::invalid_argument("range proofs need at least one bit");
  }
  RangeWitness witness;
  witness.bit_randomness.resize(l);
  mpz_class partial = 0;
  for (unsigned k = 0; k + 1 < l; ++k) {
    witness.bit_randomness[k] = rng.UniformBelow(params.exp_modulus);
    partial += witness.bit_randomness[k] << k;
  }
  // 2 is invertible mod pq since p and q are odd.
  mpz_class inv_top;
  const mpz_class top = mpz_class(1) << (l - 1);
  mpz_invert(inv_top.get_mpz_t(), top.get_mpz_t(), params.exp_modulus.get_mpz_t());
  witness.bit_randomness[l - 1] = params.exp((r - partial) * inv_top).value();

  witness.nonces.reserve(l);
  for (unsigned k = 0; k < l; ++k) {
    witness.nonces.push_back(SampleOrNonces(params, rng));
  }
  return witness;
}

OrStatement BitStatement(const GroupParams& params, const CommitKey& key,
                         const Commitment& bit_com) {
  return OrStatement{key.h2, bit_com.com, Mul(params, bit_com.com, Inverse(params, key.h1))};
}

std::string BitContext(const GroupParams& params, const Commitment& com,
                       const std::vector<Commitment>& bit_coms, std::string_view context,
                       std::size_t k) {
  const Digest params_digest = params.digest();
  TranscriptHasher h("investcoin/range");
  h.Append(std::span<const uint8_t>(params_digest)).Append(com.com.value);
  h.AppendU64(bit_coms.size());
  for (const auto& bit_com : bit_coms) {
    h.Append(bit_com.com.value);
  }
  h.Append(context);
  const Digest digest = h.Finish();
  TranscriptHasher per_bit("investcoin/range/bit");
  per_bit.Append(std::span<const uint8_t>(digest)).AppendU64(k);
  const Bytes& encoded = per_bit.encoded();
  return std::string(encoded.begin(), encoded.end());
}

RangeProof RangeProve(const GroupParams& params, const CommitKey& key, const mpz_class& x,
                      const mpz_class& r, unsigned l, std::string_view context, Drbg& rng,
                      Schedule schedule) {
  return RangeProve(params, key, x, l, SampleRangeWitness(params, r, l, rng), context, schedule);
}

RangeProof RangeProve(const GroupParams& params, const CommitKey& key, const mpz_class& x,
                      unsigned l, const RangeWitness& witness, std::string_view context,
                      Schedule schedule) {
  if (l == 0 || witness.bit_randomness.size() != l || witness.nonces.size() != l) {
    throw std::invalid_argument("range witness does not match bit length");
  }
  if (x < 0 || x > (mpz_class(1) << l) - 1) {
    throw ProtocolError(ErrorCode::kOutOfRange,
                        x.get_str() + " is outside [0, 2^" + std::to_string(l) + " - 1]");
  }
  mpz_class r = 0;
  for (unsigned k = 0; k < l; ++k) {
    r += witness.bit_randomness[k] << k;
  }
  const Commitment com = Commit(params, key, x, r);

  RangeProof proof;
  proof.bit_coms.resize(l);
  proof.bit_proofs.resize(l);
  std::vector<int> bits(l);
  for (unsigned k = 0; k < l; ++k) {
    bits[k] = mpz_tstbit(x.get_mpz_t(), k);
    proof.bit_coms[k] = Commit(params, key, bits[k], witness.bit_randomness[k]);
  }

  const long count = static_cast<long>(l);
#pragma omp parallel for schedule(static) if (schedule == Schedule::kParallel)
  for (long k = 0; k < count; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const OrStatement stmt = BitStatement(params, key, proof.bit_coms[idx]);
    const WitnessPosition position =
        bits[idx] == 0 ? WitnessPosition::kFirst : WitnessPosition::kSecond;
    proof.bit_proofs[idx] =
        OrProve(params, stmt, params.exp(witness.bit_randomness[idx]), position,
                witness.nonces[idx], BitContext(params, com, proof.bit_coms, context, idx));
  }
  return proof;
}

RangeVerdict RangeVerify(const GroupParams& params, const CommitKey& key, const Commitment& com,
                         const RangeProof& proof, unsigned l, std::string_view context) {
  if (l == 0 || proof.bit_coms.size() != l || proof.bit_proofs.size() != l) {
    return {RangeFailure::kLengthMismatch, 0};
  }
  if (!IsMember(params, com.com)) {
    return {RangeFailure::kNotMember, 0};
  }
  for (std::size_t k = 0; k < l; ++k) {
    if (!IsMember(params, proof.bit_coms[k].com)) {
      return {RangeFailure::kNotMember, k};
    }
  }
  GroupElement recombined = Identity();
  for (std::size_t k = 0; k < l; ++k) {
    recombined = Mul(params, recombined,
                     Pow(params, proof.bit_coms[k].com, params.exp(mpz_class(1) << k)));
  }
  if (recombined != com.com) {
    return {RangeFailure::kRecombination, 0};
  }
  for (std::size_t k = 0; k < l; ++k) {
    const OrStatement stmt = BitStatement(params, key, proof.bit_coms[k]);
    if (!OrVerify(params, stmt, proof.bit_proofs[k],
                  BitContext(params, com, proof.bit_coms, context, k))) {
      return {RangeFailure::kBitProof, k};
    }
  }
  return {};
}

}  // namespace investcoin
