#include <algorithm>

#include "doctest.h"

#include "investcoin/errors.hpp"
#include "investcoin/kernels.hpp"
#include "investcoin/protocol.hpp"
#include "investcoin/round.hpp"
#include "support.hpp"

using namespace investcoin;
using investcoin::testing::CachedParams;
using investcoin::testing::Toy;

namespace {

struct Fixture {
  Deployment deployment;
  std::vector<InvestorState> investors;

  const SystemSetup& setup() const { return deployment.setup; }
  const AdminSecret& admin() const { return deployment.admin; }
};

Fixture MakeFixture(const GroupParams& params, std::string_view seed) {
  Drbg rng(seed, "protocol-test");
  Fixture f;
  Drbg setup_rng = rng.Fork("setup");
  f.deployment = DieSet(params, setup_rng);
  Drbg amounts = rng.Fork("amounts");
  for (const auto& key : f.deployment.investor_keys) {
    std::vector<mpz_class> row(params.lambda, 0);
    for (unsigned j = 1; j + 2 <= params.lambda; ++j) row[j - 1] = amounts.UniformIn(0, params.m);
    Drbg inv_rng = rng.Fork("investor", key.id);
    f.investors.push_back(MakeInvestor(f.setup(), key, row, inv_rng));
  }
  return f;
}

PayBatch HonestBatch(const Fixture& f, std::size_t i, Drbg& rng) {
  const InvestorState& inv = f.investors[i];
  return PayBatch{inv.key.id, DieEnc(f.setup(), inv), DieCom(f.setup(), inv),
                  DieTesProve(f.setup(), inv, rng), PaymentClaim(inv)};
}

GroupElement Pinned(const Fixture& f, InvestorId id) {
  return PinnedZeroCipher(f.setup().params, f.deployment.keygen.board, id).c;
}

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("programmed dummy tags satisfy the cancellation equation") {
  for (const GroupParams* params : {&Toy(), &CachedParams(64), &CachedParams(64, 16, 4, 3)}) {
    for (int seed = 0; seed < 5; ++seed) {
      Drbg rng("eq1/" + std::to_string(seed), "setup");
      const Deployment d = DieSet(*params, rng);
      const SystemSetup& s = d.setup;
      const unsigned lambda = params->lambda;
      std::vector<WeightedElement> plain;
      std::vector<WeightedElement> tilde;
      for (unsigned j = 0; j + 1 < lambda; ++j) {
        plain.emplace_back(HashToGroup(s.oracle, *params, s.tags[j]), d.admin.betas[j]);
        if (j >= 1) tilde.emplace_back(HashToGroup(s.oracle, *params, s.tilde_tags[j]), d.admin.betas[j]);
      }
      CHECK(s.tag_bases[lambda - 1] == Product(*params, plain));
      CHECK(s.tag_bases[lambda] == Product(*params, plain));
      CHECK(s.tilde_bases[lambda - 1] == Product(*params, tilde));
      CHECK(s.tilde_bases[lambda] == Product(*params, tilde));
      CHECK(VerificationProductsHold(s, d.admin.betas));
      CHECK(s.oracle.programmed().size() == 4);
    }
  }
}

TEST_CASE("betas satisfy the dummy relation and stay within q'") {
  const GroupParams& params = CachedParams(64);
  for (int seed = 0; seed < 20; ++seed) {
    Drbg rng("betas/" + std::to_string(seed), "setup");
    const Deployment d = DieSet(params, rng);
    const auto& betas = d.admin.betas;
    REQUIRE(betas.size() == params.lambda + 1);
    CHECK(betas[params.lambda] == -1 - betas[params.lambda - 1]);
    for (unsigned j = 0; j < params.lambda; ++j) CHECK(abs(betas[j]) <= params.q_prime);
    CHECK(abs(betas[params.lambda]) <= params.q_prime);
  }
}

TEST_CASE("dummy slots and tags") {
  const Fixture f = MakeFixture(CachedParams(64), "dummy");
  const SystemSetup& s = f.setup();
  CHECK(s.tags.front() == "t/0");
  CHECK(s.tilde_tags.front() == "tt/0");
  CHECK_FALSE(s.is_dummy(1));
  CHECK_FALSE(s.is_dummy(3));
  CHECK(s.is_dummy(4));
  CHECK(s.is_dummy(5));
  CHECK(RangeContext(2, 3) == "investcoin/tes/2/3");
}

TEST_CASE("amount validation") {
  const Fixture f = MakeFixture(CachedParams(64), "amounts");
  const auto& key = f.deployment.investor_keys[0];
  Drbg rng("amounts", "x");
  const mpz_class m = f.setup().params.m;
  auto rejects = [&](std::vector<mpz_class> row) {
    try {
      MakeInvestor(f.setup(), key, row, rng);
    } catch (const ProtocolError& e) {
      return e.code() == ErrorCode::kAmountOutOfRange;
    }
    return false;
  };
  CHECK(rejects({-1, 0, 0, 0, 0}));
  CHECK(rejects({m + 1, 0, 0, 0, 0}));
  CHECK(rejects({0, 0, 0, 1, 0}));
  CHECK(rejects({0, 0, 0, 0}));
  CHECK_FALSE(rejects({m, 0, m, 0, 0}));
  try {
    MakeInvestor(f.setup(), key, {1, 1, 1, 0, 0}, rng, RandomnessRange::kFull);
    FAIL("expected ParameterConflict");
  } catch (const ProtocolError& e) {
    CHECK(e.code() == ErrorCode::kParameterConflict);
  }
}

TEST_CASE("honest batches pass every administrator check") {
  const Fixture f = MakeFixture(CachedParams(64), "honest");
  Drbg rng("honest", "proofs");
  for (std::size_t i = 0; i < f.investors.size(); ++i) {
    const PayBatch batch = HonestBatch(f, i, rng);
    const InvestorState& inv = f.investors[i];
    CHECK(batch.ciphers[0].c == Pinned(f, inv.key.id));
    const auto tes = DieTesVerify(f.setup(), inv.key.id, batch.bundle.coms, batch.proofs);
    CHECK(std::all_of(tes.begin(), tes.end(), [](bool b) { return b; }));
    const ConsistencyResult c = DieUnvPayConsistency(f.setup(), f.admin(), batch, Pinned(f, inv.key.id));
    CHECK(c.ok);
    mpz_class a = 0;
    mpz_class b = 0;
    for (unsigned j = 1; j <= f.setup().lambda(); ++j) {
      a += f.admin().betas[j] * inv.amount(j);
      b += f.admin().betas[j] * inv.rand(j);
    }
    CHECK(c.a == a);
    CHECK(c.b == b);
    CHECK(DieUnvPay(f.setup(), batch.bundle.coms, batch.claim));
    Claim inflated = batch.claim;
    inflated.value += 1;
    CHECK_FALSE(DieUnvPay(f.setup(), batch.bundle.coms, inflated));
  }
}

TEST_CASE("proofs for one investor do not verify for another") {
  const Fixture f = MakeFixture(CachedParams(64), "swap");
  Drbg rng("swap", "proofs");
  const PayBatch batch = HonestBatch(f, 0, rng);
  const auto tes = DieTesVerify(f.setup(), 2, batch.bundle.coms, batch.proofs);
  CHECK(std::none_of(tes.begin(), tes.end(), [](bool b) { return b; }));
}

TEST_CASE("a cipher that disagrees with its commitment aborts consistency") {
  const Fixture f = MakeFixture(CachedParams(64), "mismatch");
  Drbg rng("mismatch", "proofs");
  int caught = 0;
  for (unsigned j = 1; j <= f.setup().lambda(); ++j) {
    PayBatch batch = HonestBatch(f, 1, rng);
    if (f.admin().betas[j] == 0) continue;
    InvestorState shifted = f.investors[1];
    shifted.amounts[j] += 1;
    batch.ciphers[j].c = PsaEncWithBase(f.setup().params, f.setup().tag_bases[j], shifted.key.s,
                                        shifted.amounts[j]);
    const ConsistencyResult c =
        DieUnvPayConsistency(f.setup(), f.admin(), batch, Pinned(f, batch.investor));
    CHECK_FALSE(c.ok);
    CHECK(c.failure == ErrorCode::kConsistencyAbort);
    ++caught;
  }
  CHECK(caught > 0);
  PayBatch short_batch = HonestBatch(f, 1, rng);
  short_batch.ciphers.pop_back();
  CHECK(DieUnvPayConsistency(f.setup(), f.admin(), short_batch, Pinned(f, 2)).failure ==
        ErrorCode::kMissingCipher);
}

TEST_CASE("aggregation recovers the column sums") {
  const Fixture f = MakeFixture(CachedParams(64), "aggregate");
  Drbg rng("aggregate", "proofs");
  std::vector<PayBatch> batches;
  for (std::size_t i = 0; i < f.investors.size(); ++i) batches.push_back(HonestBatch(f, i, rng));
  const auto sums = DieDec(f.setup(), f.admin(), CipherColumns(f.setup(), batches), batches.size());
  REQUIRE(sums.size() == f.setup().lambda() + 1);
  CHECK(sums[0] == 0);
  for (unsigned j = 1; j <= f.setup().lambda(); ++j) {
    mpz_class expected = 0;
    for (const auto& inv : f.investors) expected += inv.amount(j);
    CHECK(sums[j] == expected);
  }
  CHECK(DieDec(f.setup(), f.admin(), CipherColumns(f.setup(), batches), batches.size(),
               Schedule::kParallel) == sums);

  std::vector<PayBatch> missing(batches.begin(), batches.end() - 1);
  try {
    DieDec(f.setup(), f.admin(), CipherColumns(f.setup(), missing), batches.size());
    FAIL("expected MissingCipher");
  } catch (const ProtocolError& e) {
    CHECK(e.code() == ErrorCode::kMissingCipher);
  }
}

TEST_CASE("a nonzero slot 0 is a zero-slot violation") {
  const Fixture f = MakeFixture(CachedParams(64), "zero-slot");
  Drbg rng("zero-slot", "proofs");
  std::vector<PayBatch> batches;
  for (std::size_t i = 0; i < f.investors.size(); ++i) batches.push_back(HonestBatch(f, i, rng));
  batches[0].ciphers[0].c = PsaEncWithBase(f.setup().params, f.setup().tag_bases[0],
                                           f.investors[0].key.s, 1);
  try {
    DieDec(f.setup(), f.admin(), CipherColumns(f.setup(), batches), batches.size());
    FAIL("expected ZeroSlotViolation");
  } catch (const ProtocolError& e) {
    CHECK(e.code() == ErrorCode::kZeroSlotViolation);
  }
}

TEST_CASE("return factors") {
  const Fixture f = MakeFixture(CachedParams(64), "alphas");
  const mpz_class qp = f.setup().params.q_prime;
  auto code_of = [&](std::vector<mpz_class> alphas) -> std::optional<ErrorCode> {
    try {
      ValidateAlphas(f.setup(), alphas);
    } catch (const ProtocolError& e) {
      return e.code();
    }
    return std::nullopt;
  };
  CHECK_FALSE(code_of({qp, -qp, 0, 1, 1}).has_value());
  CHECK(code_of({qp + 1, 0, 0, 1, 1}) == ErrorCode::kReturnFactorOutOfRange);
  CHECK(code_of({0, 0, 0, 0, 1}) == ErrorCode::kReturnFactorOutOfRange);
  CHECK(code_of({0, 0, 0, 1}) == ErrorCode::kReturnFactorOutOfRange);
}

TEST_CASE("return claims verify for every alpha vector, including all zeros") {
  const Fixture f = MakeFixture(CachedParams(64), "returns");
  const mpz_class qp = f.setup().params.q_prime;
  Drbg rng("returns", "alphas");
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<mpz_class> alphas(f.setup().lambda(), 0);
    if (trial > 0) {
      for (auto& a : alphas) a = rng.UniformIn(-qp, qp);
    }
    for (const auto& inv : f.investors) {
      const auto coms = DieCom(f.setup(), inv).coms;
      const Claim claim = ReturnClaim(inv, alphas);
      CHECK(DieUnvRet(f.setup(), coms, alphas, claim));
      Claim bad = claim;
      bad.opening += 1;
      CHECK_FALSE(DieUnvRet(f.setup(), coms, alphas, bad));
    }
  }
}

TEST_CASE("transfers move value between commitments") {
  const Fixture f = MakeFixture(CachedParams(64), "transfer");
  Drbg rng("transfer", "proofs");
  std::vector<PayBatch> batches;
  for (std::size_t i = 0; i < f.investors.size(); ++i) batches.push_back(HonestBatch(f, i, rng));
  Administrator admin(f.setup(), f.admin(), f.deployment.keygen.board,
                      f.deployment.keygen_tilde.board);
  CHECK(admin.CheckBoards());
  admin.ReceivePayments(batches);
  REQUIRE(admin.verdict().accepted);

  std::vector<InvestorState> investors = f.investors;
  const mpz_class delta = investors[0].amount(1) / 2;
  const mpz_class rho = 5;
  const TransferRequest ok =
      PrepareTransfer(f.setup(), investors[0], investors[1], 1, delta, rho, 0, true, rng);
  CHECK_FALSE(admin.ApplyTransfer(ok).has_value());
  SettleTransfer(investors[0], investors[1], 1, delta, rho);
  for (unsigned id : {1u, 2u}) {
    CHECK(admin.commitments(id)[0] == DieCom(f.setup(), investors[id - 1]).coms[0]);
  }

  const mpz_class over = investors[2].amount(1) + 1;
  const TransferRequest bad =
      PrepareTransfer(f.setup(), investors[2], investors[3], 1, over, 0, 1, true, rng);
  CHECK(admin.ApplyTransfer(bad) == ErrorCode::kRangeRecheckFailed);

  TransferRequest split = ok;
  split.sequence = 2;
  split.to_com = Commit(f.setup().params, f.setup().commit_key, delta + 1, rho);
  CHECK(admin.ApplyTransfer(split) == ErrorCode::kTransferMismatch);

  const TransferRequest dummy =
      PrepareTransfer(f.setup(), investors[0], investors[1], 4, 0, 0, 3, false, rng);
  CHECK(admin.ApplyTransfer(dummy) == ErrorCode::kTransferMismatch);

  admin.PublishAlphas({2, -1, 3, 1, 1});
  std::vector<ReturnBatch> returns;
  for (const auto& inv : investors) {
    returns.push_back(ReturnBatch{inv.key.id, ReturnClaim(inv, {2, -1, 3, 1, 1})});
  }
  admin.ReceiveReturns(returns);
  const RoundVerdict& verdict = admin.verdict();
  for (const auto& inv : verdict.investors) CHECK(inv.returned == true);
  CHECK(ConservationHolds(verdict));
}

}  // TEST_SUITE
