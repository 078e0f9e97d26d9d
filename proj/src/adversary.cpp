#include "investcoin/adversary.hpp"

#include <array>
#include <utility>

namespace investcoin {
namespace {

constexpr std::array<std::pair<Behaviour, std::string_view>, 7> kBehaviourNames{{
    {Behaviour::kHonest, "honest"},
    {Behaviour::kMismatch, "mismatch"},
    {Behaviour::kNegativeAmount, "negative-amount"},
    {Behaviour::kFreshKey, "fresh-key"},
    {Behaviour::kWrongTags, "wrong-tags"},
    {Behaviour::kInflateClaim, "inflate-claim"},
    {Behaviour::kWithhold, "withhold"},
}};

constexpr std::array<std::pair<ClaimField, std::string_view>, 4> kFieldNames{{
    {ClaimField::kC, "C"},
    {ClaimField::kD, "D"},
    {ClaimField::kE, "E"},
    {ClaimField::kF, "F"},
}};

std::string WrongTag(unsigned j) { return "forged/t/" + std::to_string(j); }

}  // namespace

std::string_view BehaviourName(Behaviour behaviour) {
  for (const auto& [value, name] : kBehaviourNames) {
    if (value == behaviour) return name;
  }
  return "unknown";
}

std::optional<Behaviour> ParseBehaviour(std::string_view name) {
  for (const auto& [value, label] : kBehaviourNames) {
    if (label == name) return value;
  }
  return std::nullopt;
}

std::string_view ClaimFieldName(ClaimField field) {
  for (const auto& [value, name] : kFieldNames) {
    if (value == field) return name;
  }
  return "unknown";
}

std::optional<ClaimField> ParseClaimField(std::string_view name) {
  for (const auto& [value, label] : kFieldNames) {
    if (label == name) return value;
  }
  return std::nullopt;
}

OrProof UncheckedOrProof(const GroupParams& params, const OrStatement& stmt,
                         const Exponent& claimed, WitnessPosition position, Drbg& rng,
                         std::string_view context) {
  const OrNonces nonces = SampleOrNonces(params, rng);
  const GroupElement& simulated_target = position == WitnessPosition::kFirst ? stmt.S : stmt.R;
  const GroupElement real_a = Pow(params, stmt.h, nonces.z);
  const GroupElement sim_a = Mul(params, Pow(params, stmt.h, nonces.w_sim),
                                 Pow(params, simulated_target, params.exp(-nonces.v_sim.value())));
  OrProof proof;
  proof.a1 = position == WitnessPosition::kFirst ? real_a : sim_a;
  proof.a2 = position == WitnessPosition::kFirst ? sim_a : real_a;
  proof.v = OrChallenge(params, stmt, proof.a1, proof.a2, context);
  const Exponent real_v = params.exp(proof.v.value() - nonces.v_sim.value());
  const Exponent real_w = params.exp(nonces.z.value() + real_v.value() * claimed.value());
  if (position == WitnessPosition::kFirst) {
    proof.v1 = real_v;
    proof.w1 = real_w;
    proof.v2 = nonces.v_sim;
    proof.w2 = nonces.w_sim;
  } else {
    proof.v1 = nonces.v_sim;
    proof.w1 = nonces.w_sim;
    proof.v2 = real_v;
    proof.w2 = real_w;
  }
  return proof;
}

RangeProof ForgeDigits(const GroupParams& params, const CommitKey& key, const mpz_class& x,
                       const mpz_class& r, const std::vector<mpz_class>& digits,
                       std::string_view context, Drbg& rng) {
  const auto l = static_cast<unsigned>(digits.size());
  const RangeWitness witness = SampleRangeWitness(params, r, l, rng);
  const Commitment com = Commit(params, key, x, r);
  RangeProof proof;
  for (unsigned k = 0; k < l; ++k) {
    proof.bit_coms.push_back(Commit(params, key, digits[k], witness.bit_randomness[k]));
  }
  for (unsigned k = 0; k < l; ++k) {
    const OrStatement stmt = BitStatement(params, key, proof.bit_coms[k]);
    const std::string ctx = BitContext(params, com, proof.bit_coms, context, k);
    const Exponent rand = params.exp(witness.bit_randomness[k]);
    if (digits[k] == 0 || digits[k] == 1) {
      const auto position = digits[k] == 0 ? WitnessPosition::kFirst : WitnessPosition::kSecond;
      proof.bit_proofs.push_back(OrProve(params, stmt, rand, position, witness.nonces[k], ctx));
    } else {
      proof.bit_proofs.push_back(
          UncheckedOrProof(params, stmt, rand, WitnessPosition::kFirst, rng, ctx));
    }
  }
  return proof;
}

RangeProof ForgeExtraBit(const GroupParams& params, const CommitKey& key, const mpz_class& x,
                         const mpz_class& r, unsigned l, std::string_view context, Drbg& rng) {
  return RangeProve(params, key, x, r, l + 1, context, rng);
}

RangeProof ForgeLowBits(const GroupParams& params, const CommitKey& key, const mpz_class& x,
                        const mpz_class& r, unsigned l, std::string_view context, Drbg& rng) {
  mpz_class residue = params.exp(x).value();
  mpz_class low;
  mpz_fdiv_r_2exp(low.get_mpz_t(), residue.get_mpz_t(), l);
  const RangeWitness witness = SampleRangeWitness(params, r, l, rng);
  const Commitment com = Commit(params, key, x, r);
  RangeProof proof;
  for (unsigned k = 0; k < l; ++k) {
    proof.bit_coms.push_back(
        Commit(params, key, mpz_tstbit(low.get_mpz_t(), k), witness.bit_randomness[k]));
  }
  for (unsigned k = 0; k < l; ++k) {
    const OrStatement stmt = BitStatement(params, key, proof.bit_coms[k]);
    const auto position = mpz_tstbit(low.get_mpz_t(), k) ? WitnessPosition::kSecond
                                                          : WitnessPosition::kFirst;
    proof.bit_proofs.push_back(OrProve(params, stmt, params.exp(witness.bit_randomness[k]),
                                       position, witness.nonces[k],
                                       BitContext(params, com, proof.bit_coms, context, k)));
  }
  return proof;
}

std::vector<mpz_class> NegativeDigits(const mpz_class& x, unsigned l) {
  std::vector<mpz_class> digits(l, 0);
  digits[0] = x;
  return digits;
}

std::optional<PayBatch> AdversarialPayBatch(const SystemSetup& setup, const InvestorState& investor,
                                            const AdversarySpec& spec, Drbg& rng) {
  const GroupParams& params = setup.params;
  const unsigned lambda = setup.lambda();
  const unsigned j = spec.project;
  if (spec.behaviour != Behaviour::kHonest && spec.behaviour != Behaviour::kWithhold &&
      (j == 0 || j > lambda)) {
    throw std::invalid_argument("adversarial project index out of range");
  }

  PayBatch batch;
  batch.investor = investor.key.id;
  switch (spec.behaviour) {
    case Behaviour::kWithhold:
      return std::nullopt;

    case Behaviour::kHonest:
    case Behaviour::kInflateClaim:
      batch.ciphers = DieEnc(setup, investor);
      batch.bundle = DieCom(setup, investor);
      batch.proofs = DieTesProve(setup, investor, rng);
      batch.claim = PaymentClaim(investor);
      if (spec.behaviour == Behaviour::kInflateClaim) {
        if (spec.field == ClaimField::kC) batch.claim.value += spec.delta;
        if (spec.field == ClaimField::kD) batch.claim.opening += spec.delta;
      }
      return batch;

    case Behaviour::kMismatch: {
      batch.ciphers = DieEnc(setup, investor);
      batch.ciphers[j].c = PsaEncWithBase(params, setup.tag_bases[j], investor.key.s,
                                          investor.amount(j) + spec.delta);
      batch.bundle = DieCom(setup, investor);
      batch.proofs = DieTesProve(setup, investor, rng);
      batch.claim = PaymentClaim(investor);
      return batch;
    }

    case Behaviour::kNegativeAmount: {
      InvestorState forged = investor;
      forged.amounts[j] = -abs(spec.delta);
      for (unsigned k = 0; k <= lambda; ++k) {
        batch.ciphers.push_back(PsaCiphertext{
            PsaEncWithBase(params, setup.tag_bases[k], forged.key.s, forged.amounts[k]),
            setup.tags[k]});
      }
      batch.bundle = DieCom(setup, forged);
      for (unsigned k = 1; k <= lambda; ++k) {
        const std::string ctx = RangeContext(forged.key.id, k);
        if (k == j) {
          batch.proofs.push_back(ForgeDigits(params, setup.commit_key, forged.amount(k),
                                             forged.rand(k),
                                             NegativeDigits(forged.amount(k), params.l), ctx, rng));
        } else {
          batch.proofs.push_back(RangeProve(params, setup.commit_key, forged.amount(k),
                                            forged.rand(k), params.l, ctx, rng));
        }
      }
      batch.claim = PaymentClaim(forged);
      return batch;
    }

    case Behaviour::kFreshKey: {
      const PsaKey fresh{params.exp(rng.UniformBelow(params.exp_modulus))};
      for (unsigned k = 0; k <= lambda; ++k) {
        batch.ciphers.push_back(PsaCiphertext{
            PsaEncWithBase(params, setup.tag_bases[k], fresh, investor.amounts[k]),
            setup.tags[k]});
      }
      batch.bundle = DieCom(setup, investor);
      batch.proofs = DieTesProve(setup, investor, rng);
      batch.claim = PaymentClaim(investor);
      return batch;
    }

    case Behaviour::kWrongTags: {
      batch.ciphers = DieEnc(setup, investor);
      for (unsigned k = 1; k <= lambda; ++k) {
        const GroupElement base = HashToGroup(setup.oracle, params, WrongTag(k));
        batch.ciphers[k].c = PsaEncWithBase(params, base, investor.key.s, investor.amounts[k]);
      }
      batch.bundle = DieCom(setup, investor);
      batch.proofs = DieTesProve(setup, investor, rng);
      batch.claim = PaymentClaim(investor);
      return batch;
    }
  }
  return batch;
}

Claim AdversarialReturnClaim(const InvestorState& investor, const std::vector<mpz_class>& alphas,
                             const AdversarySpec& spec) {
  Claim claim = ReturnClaim(investor, alphas);
  if (spec.behaviour == Behaviour::kInflateClaim) {
    if (spec.field == ClaimField::kE) claim.value += spec.delta;
    if (spec.field == ClaimField::kF) claim.opening += spec.delta;
  }
  return claim;
}

}  // namespace investcoin
