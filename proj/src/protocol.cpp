#include "investcoin/protocol.hpp"

#include <stdexcept>

namespace investcoin {
namespace {

void Require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) {
    throw ProtocolError(code, what);
  }
}

mpz_class ConsistencyBound(const GroupParams& params) {
  return params.q_prime * params.m * params.lambda;
}

GroupElement WeightedProduct(const GroupParams& params, const std::vector<GroupElement>& elements,
                             const std::vector<mpz_class>& weights, std::size_t weight_offset) {
  std::vector<WeightedElement> terms;
  terms.reserve(elements.size());
  for (std::size_t k = 0; k < elements.size(); ++k) {
    terms.emplace_back(elements[k], weights[k + weight_offset]);
  }
  return Product(params, terms);
}

}  // namespace

std::string ProjectTag(unsigned j) { return "t/" + std::to_string(j); }
std::string RandomnessTag(unsigned j) { return "tt/" + std::to_string(j); }

std::string RangeContext(InvestorId investor, unsigned project) {
  return "investcoin/tes/" + std::to_string(investor) + "/" + std::to_string(project);
}

void CacheTagBases(SystemSetup& setup) {
  setup.tag_bases.clear();
  setup.tilde_bases.clear();
  for (const auto& tag : setup.tags) {
    setup.tag_bases.push_back(HashToGroup(setup.oracle, setup.params, tag));
  }
  for (const auto& tag : setup.tilde_tags) {
    setup.tilde_bases.push_back(HashToGroup(setup.oracle, setup.params, tag));
  }
}

bool VerificationProductsHold(const SystemSetup& setup, const std::vector<mpz_class>& betas) {
  const unsigned lambda = setup.lambda();
  if (betas.size() != lambda + 1) {
    return false;
  }
  std::vector<WeightedElement> plain;
  std::vector<WeightedElement> tilde;
  for (unsigned j = 0; j <= lambda; ++j) {
    plain.emplace_back(HashToGroup(setup.oracle, setup.params, setup.tags[j]), betas[j]);
    if (j >= 1) {
      tilde.emplace_back(HashToGroup(setup.oracle, setup.params, setup.tilde_tags[j]), betas[j]);
    }
  }
  return Product(setup.params, plain) == Identity() && Product(setup.params, tilde) == Identity();
}

Deployment DieSet(const GroupParams& params, Drbg& rng) {
  const unsigned lambda = params.lambda;
  Require(lambda >= 3, ErrorCode::kParameterConflict, "lambda must be at least 3");
  Require(params.q_prime >= 1, ErrorCode::kParameterConflict, "q' must be at least 1");

  Deployment out;
  SystemSetup& setup = out.setup;
  setup.params = params;
  setup.commit_key = CommitKeyFrom(params);
  for (unsigned j = 0; j <= lambda; ++j) {
    setup.tags.push_back(ProjectTag(j));
    setup.tilde_tags.push_back(RandomnessTag(j));
  }

  Drbg beta_rng = rng.Fork("setup/betas");
  std::vector<mpz_class>& betas = out.admin.betas;
  betas.resize(lambda + 1);
  const mpz_class& qp = params.q_prime;
  for (unsigned j = 0; j + 1 < lambda; ++j) {
    betas[j] = beta_rng.UniformIn(-qp, qp);
  }
  betas[lambda - 1] = beta_rng.UniformIn(-qp, qp - 1);
  betas[lambda] = -1 - betas[lambda - 1];

  std::vector<WeightedElement> plain;
  std::vector<WeightedElement> tilde;
  for (unsigned j = 0; j + 1 < lambda; ++j) {
    plain.emplace_back(HashToGroup(setup.oracle, params, setup.tags[j]), betas[j]);
    if (j >= 1) {
      tilde.emplace_back(HashToGroup(setup.oracle, params, setup.tilde_tags[j]), betas[j]);
    }
  }
  const GroupElement dummy = Product(params, plain);
  const GroupElement dummy_tilde = Product(params, tilde);
  for (unsigned j : {lambda - 1, lambda}) {
    setup.oracle.Program(setup.tags[j], dummy);
    setup.oracle.Program(setup.tilde_tags[j], dummy_tilde);
  }
  CacheTagBases(setup);
  if (!VerificationProductsHold(setup, betas)) {
    throw std::logic_error("verification products do not cancel after programming");
  }

  Drbg keygen_rng = rng.Fork("setup/keygen");
  Drbg keygen_tilde_rng = rng.Fork("setup/keygen-tilde");
  out.keygen = RunKeygen(params, setup.oracle, setup.tags[0], params.n, keygen_rng);
  out.keygen_tilde = RunKeygen(params, setup.oracle, setup.tilde_tags[0], params.n, keygen_tilde_rng);
  out.admin.s0 = out.keygen.admin_key;
  out.admin.s0_tilde = out.keygen_tilde.admin_key;
  out.admin.column_sums = out.keygen.column_sums;
  out.admin.column_sums_tilde = out.keygen_tilde.column_sums;
  for (std::size_t a = 0; a < params.n; ++a) {
    out.investor_keys.push_back(InvestorKey{out.keygen.matrix.ids[a], out.keygen.investor_keys[a],
                                            out.keygen_tilde.investor_keys[a]});
  }
  return out;
}

void ValidateAmounts(const SystemSetup& setup, const std::vector<mpz_class>& amounts) {
  const unsigned lambda = setup.lambda();
  Require(amounts.size() == lambda + 1, ErrorCode::kAmountOutOfRange,
          "expected " + std::to_string(lambda + 1) + " amount slots");
  Require(amounts[0] == 0, ErrorCode::kAmountOutOfRange, "slot 0 must carry 0");
  for (unsigned j = 1; j <= lambda; ++j) {
    if (setup.is_dummy(j)) {
      Require(amounts[j] == 0, ErrorCode::kAmountOutOfRange,
              "dummy project " + std::to_string(j) + " must carry 0");
    }
    Require(amounts[j] >= 0 && amounts[j] <= setup.params.m, ErrorCode::kAmountOutOfRange,
            "amount " + amounts[j].get_str() + " for project " + std::to_string(j) +
                " is outside [0, " + setup.params.m.get_str() + "]");
  }
}

InvestorState MakeInvestor(const SystemSetup& setup, const InvestorKey& key,
                           const std::vector<mpz_class>& project_amounts, Drbg& rng,
                           RandomnessRange range) {
  Require(range == RandomnessRange::kInvestmentRange, ErrorCode::kParameterConflict,
          "commitment randomness must lie in [0, m] for the c~ consistency check");
  const unsigned lambda = setup.lambda();
  InvestorState state;
  state.key = key;
  state.amounts.assign(lambda + 1, 0);
  Require(project_amounts.size() == lambda, ErrorCode::kAmountOutOfRange,
          "expected " + std::to_string(lambda) + " project amounts");
  for (unsigned j = 1; j <= lambda; ++j) {
    state.amounts[j] = project_amounts[j - 1];
  }
  ValidateAmounts(setup, state.amounts);
  for (unsigned j = 1; j <= lambda; ++j) {
    state.randomness.push_back(SampleCommitRandomness(setup.params, range, rng));
  }
  return state;
}

std::vector<PsaCiphertext> DieEnc(const SystemSetup& setup, const InvestorState& investor) {
  ValidateAmounts(setup, investor.amounts);
  std::vector<PsaCiphertext> ciphers;
  for (unsigned j = 0; j <= setup.lambda(); ++j) {
    ciphers.push_back(PsaCiphertext{
        PsaEncWithBase(setup.params, setup.tag_bases[j], investor.key.s, investor.amounts[j]),
        setup.tags[j]});
  }
  return ciphers;
}

CommitmentBundle DieCom(const SystemSetup& setup, const InvestorState& investor) {
  CommitmentBundle bundle;
  for (unsigned j = 1; j <= setup.lambda(); ++j) {
    bundle.coms.push_back(
        Commit(setup.params, setup.commit_key, investor.amount(j), investor.rand(j)));
    bundle.tilde.push_back(PsaCiphertext{
        PsaEncWithBase(setup.params, setup.tilde_bases[j], investor.key.s_tilde, investor.rand(j)),
        setup.tilde_tags[j]});
  }
  return bundle;
}

std::vector<RangeProof> DieTesProve(const SystemSetup& setup, const InvestorState& investor,
                                    Drbg& rng) {
  std::vector<RangeProof> proofs;
  for (unsigned j = 1; j <= setup.lambda(); ++j) {
    proofs.push_back(RangeProve(setup.params, setup.commit_key, investor.amount(j),
                                investor.rand(j), setup.params.l,
                                RangeContext(investor.key.id, j), rng));
  }
  return proofs;
}

std::vector<bool> DieTesVerify(const SystemSetup& setup, InvestorId investor,
                               const std::vector<Commitment>& coms,
                               const std::vector<RangeProof>& proofs) {
  const unsigned lambda = setup.lambda();
  std::vector<bool> verdicts(lambda, false);
  for (unsigned j = 1; j <= lambda; ++j) {
    if (j - 1 < coms.size() && j - 1 < proofs.size()) {
      verdicts[j - 1] = RangeVerify(setup.params, setup.commit_key, coms[j - 1], proofs[j - 1],
                                    setup.params.l, RangeContext(investor, j))
                            .accepted();
    }
  }
  return verdicts;
}

Claim PaymentClaim(const InvestorState& investor) {
  Claim claim;
  for (const auto& x : investor.amounts) {
    claim.value += x;
  }
  for (const auto& r : investor.randomness) {
    claim.opening += r;
  }
  return claim;
}

Claim ReturnClaim(const InvestorState& investor, const std::vector<mpz_class>& alphas) {
  Claim claim;
  for (std::size_t j = 1; j < investor.amounts.size(); ++j) {
    claim.value += alphas[j - 1] * investor.amounts[j];
    claim.opening += alphas[j - 1] * investor.randomness[j - 1];
  }
  return claim;
}

ConsistencyResult DieUnvPayConsistency(const SystemSetup& setup, const AdminSecret& admin,
                                       const PayBatch& batch, const GroupElement& pinned_zero) {
  const GroupParams& params = setup.params;
  const unsigned lambda = setup.lambda();
  ConsistencyResult result;
  if (batch.ciphers.size() != lambda + 1 || batch.bundle.coms.size() != lambda ||
      batch.bundle.tilde.size() != lambda) {
    result.failure = ErrorCode::kMissingCipher;
    return result;
  }
  std::vector<GroupElement> ciphers{pinned_zero};
  for (unsigned j = 1; j <= lambda; ++j) {
    ciphers.push_back(batch.ciphers[j].c);
  }
  std::vector<GroupElement> tilde;
  for (const auto& c : batch.bundle.tilde) {
    tilde.push_back(c.c);
  }
  try {
    const mpz_class bound = ConsistencyBound(params);
    result.a = ExtractSum(params, WeightedProduct(params, ciphers, admin.betas, 0), bound);
    result.b = ExtractSum(params, WeightedProduct(params, tilde, admin.betas, 1), bound);
  } catch (const ProtocolError& e) {
    result.failure = e.code();
    return result;
  } catch (const std::domain_error&) {
    result.failure = ErrorCode::kMalformedAggregate;
    return result;
  }
  std::vector<WeightedCommitment> weighted;
  for (unsigned j = 1; j <= lambda; ++j) {
    weighted.emplace_back(batch.bundle.coms[j - 1], admin.betas[j]);
  }
  try {
    result.ok = Unv(params, setup.commit_key, Combine(params, weighted), result.a, result.b);
  } catch (const std::domain_error&) {
    result.ok = false;
  }
  if (!result.ok) {
    result.failure = ErrorCode::kConsistencyAbort;
  }
  return result;
}

bool DieUnvPay(const SystemSetup& setup, const std::vector<Commitment>& coms, const Claim& claim) {
  std::vector<WeightedCommitment> unit;
  for (const auto& com : coms) {
    unit.emplace_back(com, 1);
  }
  return Unv(setup.params, setup.commit_key, Combine(setup.params, unit), claim.value,
             claim.opening);
}

std::vector<mpz_class> DieDec(const SystemSetup& setup, const AdminSecret& admin,
                              const std::vector<std::vector<PsaCiphertext>>& column_ciphers,
                              std::size_t expected_investors, Schedule schedule) {
  const unsigned lambda = setup.lambda();
  Require(column_ciphers.size() == lambda + 1, ErrorCode::kMissingCipher,
          "expected " + std::to_string(lambda + 1) + " cipher columns");
  for (unsigned j = 0; j <= lambda; ++j) {
    Require(column_ciphers[j].size() == expected_investors, ErrorCode::kMissingCipher,
            "column " + std::to_string(j) + " holds " + std::to_string(column_ciphers[j].size()) +
                " of " + std::to_string(expected_investors) + " ciphers");
  }
  const mpz_class bound = setup.params.m * mpz_class(static_cast<unsigned long>(expected_investors));
  std::vector<mpz_class> sums(lambda + 1);
  std::vector<std::optional<ProtocolError>> errors(lambda + 1);
  const long count = static_cast<long>(lambda) + 1;
#pragma omp parallel for schedule(static) if (schedule == Schedule::kParallel)
  for (long j = 0; j < count; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    try {
      GroupElement acc = Pow(setup.params, setup.tag_bases[idx], admin.s0.s);
      for (const auto& cipher : column_ciphers[idx]) {
        if (cipher.tag != setup.tags[idx]) {
          throw ProtocolError(ErrorCode::kMalformedAggregate,
                              "cipher tag '" + cipher.tag + "' in column " + std::to_string(idx));
        }
        acc = Mul(setup.params, acc, cipher.c);
      }
      sums[idx] = ExtractSum(setup.params, acc, bound);
    } catch (const ProtocolError& e) {
      errors[idx] = e;
    }
  }
  for (const auto& error : errors) {
    if (error) {
      throw *error;
    }
  }
  Require(sums[0] == 0, ErrorCode::kZeroSlotViolation, "X_0 = " + sums[0].get_str());
  return sums;
}

void ValidateAlphas(const SystemSetup& setup, const std::vector<mpz_class>& alphas) {
  const unsigned lambda = setup.lambda();
  Require(alphas.size() == lambda, ErrorCode::kReturnFactorOutOfRange,
          "expected " + std::to_string(lambda) + " return factors");
  for (unsigned j = 1; j <= lambda; ++j) {
    const mpz_class& alpha = alphas[j - 1];
    Require(abs(alpha) <= setup.params.q_prime, ErrorCode::kReturnFactorOutOfRange,
            "alpha_" + std::to_string(j) + " = " + alpha.get_str() + " exceeds q'");
    if (setup.is_dummy(j)) {
      Require(alpha == 1, ErrorCode::kReturnFactorOutOfRange,
              "dummy return factor alpha_" + std::to_string(j) + " must be 1");
    }
  }
}

bool DieUnvRet(const SystemSetup& setup, const std::vector<Commitment>& coms,
               const std::vector<mpz_class>& alphas, const Claim& claim) {
  std::vector<WeightedCommitment> weighted;
  for (std::size_t j = 0; j < coms.size() && j < alphas.size(); ++j) {
    weighted.emplace_back(coms[j], alphas[j]);
  }
  try {
    return Unv(setup.params, setup.commit_key, Combine(setup.params, weighted), claim.value,
               claim.opening);
  } catch (const std::domain_error&) {
    return false;
  }
}

}  // namespace investcoin
