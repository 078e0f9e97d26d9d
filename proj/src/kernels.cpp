#include "investcoin/kernels.hpp"

#include <exception>
#include <stdexcept>

namespace investcoin {
namespace {

// Runs body(i) for i in [0, count), rethrowing the first exception by index.
template <typename Body>
void ForEach(std::size_t count, Schedule schedule, Body body) {
  std::vector<std::exception_ptr> errors(count);
  const long total = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic) if (schedule == Schedule::kParallel)
  for (long i = 0; i < total; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& error : errors) {
    if (error) {
      std::rethrow_exception(error);
    }
  }
}

}  // namespace

std::vector<PayBatch> BuildPayBatches(const SystemSetup& setup,
                                      const std::vector<InvestorState>& investors,
                                      std::vector<Drbg>& rngs, Schedule schedule) {
  if (rngs.size() != investors.size()) {
    throw std::invalid_argument("one generator per investor required");
  }
  std::vector<PayBatch> batches(investors.size());
  ForEach(investors.size(), schedule, [&](std::size_t i) {
    const InvestorState& investor = investors[i];
    PayBatch& batch = batches[i];
    batch.investor = investor.key.id;
    batch.ciphers = DieEnc(setup, investor);
    batch.bundle = DieCom(setup, investor);
    batch.proofs = DieTesProve(setup, investor, rngs[i]);
    batch.claim = PaymentClaim(investor);
  });
  return batches;
}

std::vector<PaymentCheck> VerifyPayments(const SystemSetup& setup, const AdminSecret& admin,
                                         const std::vector<PayBatch>& batches,
                                         const std::vector<GroupElement>& pinned,
                                         Schedule schedule) {
  if (pinned.size() != batches.size()) {
    throw std::invalid_argument("one pinned cipher per batch required");
  }
  std::vector<PaymentCheck> checks(batches.size());
  ForEach(batches.size(), schedule, [&](std::size_t i) {
    const PayBatch& batch = batches[i];
    PaymentCheck& check = checks[i];
    check.range_ok = DieTesVerify(setup, batch.investor, batch.bundle.coms, batch.proofs);
    check.pinned_ok = !batch.ciphers.empty() && batch.ciphers[0].c == pinned[i] &&
                      batch.ciphers[0].tag == setup.tags[0];
    check.consistency = DieUnvPayConsistency(setup, admin, batch, pinned[i]);
    check.paid = check.consistency.ok && DieUnvPay(setup, batch.bundle.coms, batch.claim);
  });
  return checks;
}

std::vector<bool> VerifyReturns(const SystemSetup& setup,
                                const std::vector<std::vector<Commitment>>& coms,
                                const std::vector<mpz_class>& alphas,
                                const std::vector<Claim>& claims, Schedule schedule) {
  if (coms.size() != claims.size()) {
    throw std::invalid_argument("one claim per commitment vector required");
  }
  std::vector<char> verdicts(claims.size(), 0);
  ForEach(claims.size(), schedule, [&](std::size_t i) {
    verdicts[i] = DieUnvRet(setup, coms[i], alphas, claims[i]) ? 1 : 0;
  });
  return std::vector<bool>(verdicts.begin(), verdicts.end());
}

std::vector<std::vector<PsaCiphertext>> CipherColumns(const SystemSetup& setup,
                                                      const std::vector<PayBatch>& batches) {
  std::vector<std::vector<PsaCiphertext>> columns(setup.lambda() + 1);
  for (const auto& batch : batches) {
    for (std::size_t j = 0; j < batch.ciphers.size() && j < columns.size(); ++j) {
      columns[j].push_back(batch.ciphers[j]);
    }
  }
  return columns;
}

}  // namespace investcoin
