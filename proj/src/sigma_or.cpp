#include "investcoin/sigma_or.hpp"

#include "investcoin/errors.hpp"

namespace investcoin {
namespace {

bool EquationsHold(const GroupParams& params, const OrStatement& stmt, const OrProof& proof) {
  if (!IsMember(params, proof.a1) || !IsMember(params, proof.a2) || !IsMember(params, stmt.R) ||
      !IsMember(params, stmt.S)) {
    return false;
  }
  const GroupElement lhs1 = Pow(params, stmt.h, proof.w1);
  const GroupElement rhs1 = Mul(params, proof.a1, Pow(params, stmt.R, proof.v1));
  if (lhs1 != rhs1) {
    return false;
  }
  const GroupElement lhs2 = Pow(params, stmt.h, proof.w2);
  const GroupElement rhs2 = Mul(params, proof.a2, Pow(params, stmt.S, proof.v2));
  return lhs2 == rhs2;
}

// h^w * Y^{-v}: the first message of a simulated branch.
GroupElement SimulatedCommitment(const GroupParams& params, const GroupElement& h,
                                 const GroupElement& y, const Exponent& v, const Exponent& w) {
  return Mul(params, Pow(params, h, w), Pow(params, y, params.exp(-v.value())));
}

}  // namespace

OrNonces SampleOrNonces(const GroupParams& params, Drbg& rng) {
  OrNonces nonces;
  nonces.z = params.exp(rng.UniformNonZeroBelow(params.exp_modulus));
  nonces.v_sim = params.exp(rng.UniformNonZeroBelow(params.exp_modulus));
  nonces.w_sim = params.exp(rng.UniformNonZeroBelow(params.exp_modulus));
  return nonces;
}

OrProver::OrProver(const GroupParams& params, const OrStatement& stmt, const Exponent& witness,
                   WitnessPosition position, const OrNonces& nonces)
    : params_(&params), witness_(witness), position_(position), nonces_(nonces) {
  const GroupElement image = Pow(params, stmt.h, witness);
  const GroupElement& expected = position == WitnessPosition::kFirst ? stmt.R : stmt.S;
  if (image != expected) {
    throw ProtocolError(ErrorCode::kWitnessMismatch, "h^witness does not match the statement");
  }
  if (position == WitnessPosition::kFirst) {
    a1_ = Pow(params, stmt.h, nonces.z);
    a2_ = SimulatedCommitment(params, stmt.h, stmt.S, nonces.v_sim, nonces.w_sim);
  } else {
    a1_ = SimulatedCommitment(params, stmt.h, stmt.R, nonces.v_sim, nonces.w_sim);
    a2_ = Pow(params, stmt.h, nonces.z);
  }
}

OrProof OrProver::Respond(const Exponent& challenge) const {
  const GroupParams& params = *params_;
  OrProof proof;
  proof.a1 = a1_;
  proof.a2 = a2_;
  proof.v = challenge;
  const Exponent real_v = params.exp(challenge.value() - nonces_.v_sim.value());
  const Exponent real_w = params.exp(nonces_.z.value() + real_v.value() * witness_.value());
  if (position_ == WitnessPosition::kFirst) {
    proof.v1 = real_v;
    proof.w1 = real_w;
    proof.v2 = nonces_.v_sim;
    proof.w2 = nonces_.w_sim;
  } else {
    proof.v1 = nonces_.v_sim;
    proof.w1 = nonces_.w_sim;
    proof.v2 = real_v;
    proof.w2 = real_w;
  }
  return proof;
}

Exponent OrChallenge(const GroupParams& params, const OrStatement& stmt, const GroupElement& a1,
                     const GroupElement& a2, std::string_view context) {
  const Digest params_digest = params.digest();
  TranscriptHasher h("investcoin/or-challenge");
  h.Append(std::span<const uint8_t>(params_digest));
  h.Append(stmt.h.value).Append(stmt.R.value).Append(stmt.S.value);
  h.Append(a1.value).Append(a2.value).Append(context);
  const std::size_t bits = mpz_sizeinbase(params.exp_modulus.get_mpz_t(), 2) + 64;
  Exponent v = params.exp(h.Expand(bits));
  if (v.value() == 0) {
    v = params.exp(1);
  }
  return v;
}

OrProof OrProve(const GroupParams& params, const OrStatement& stmt, const Exponent& witness,
                WitnessPosition position, const OrNonces& nonces, std::string_view context) {
  OrProver prover(params, stmt, witness, position, nonces);
  return prover.Respond(OrChallenge(params, stmt, prover.a1(), prover.a2(), context));
}

OrProof OrProve(const GroupParams& params, const OrStatement& stmt, const Exponent& witness,
                WitnessPosition position, Drbg& rng, std::string_view context) {
  return OrProve(params, stmt, witness, position, SampleOrNonces(params, rng), context);
}

bool OrVerifyInteractive(const GroupParams& params, const OrStatement& stmt, const OrProof& proof,
                         const Exponent& challenge) {
  if (params.exp(proof.v1.value() + proof.v2.value()) != challenge) {
    return false;
  }
  return EquationsHold(params, stmt, proof);
}

bool OrVerify(const GroupParams& params, const OrStatement& stmt, const OrProof& proof,
              std::string_view context) {
  return OrVerifyInteractive(params, stmt, proof,
                             OrChallenge(params, stmt, proof.a1, proof.a2, context));
}

}  // namespace investcoin
