#pragma once

#include <vector>

#include "investcoin/protocol.hpp"
#include "investcoin/random.hpp"
#include "investcoin/schedule.hpp"

namespace investcoin {

// Data-parallel kernels of one round. Every kernel has the same output under
// both schedules; kSerial is the reference.

// Investor side: ciphers, commitments, range proofs and payment claim for
// each investor. rngs[i] drives investor i's range proofs.
std::vector<PayBatch> BuildPayBatches(const SystemSetup& setup,
                                      const std::vector<InvestorState>& investors,
                                      std::vector<Drbg>& rngs, Schedule schedule);

struct PaymentCheck {
  std::vector<bool> range_ok;  // b_{T,i,j}, j = 1..lambda
  bool pinned_ok = false;      // sent c_{i,0} equals the board product
  ConsistencyResult consistency;
  bool paid = false;           // b_{P,i}; false when consistency failed
};

// Administrator side: DIETes verification, the consistency check and b_P for
// each batch. pinned[i] is the board product for batches[i].investor.
std::vector<PaymentCheck> VerifyPayments(const SystemSetup& setup, const AdminSecret& admin,
                                         const std::vector<PayBatch>& batches,
                                         const std::vector<GroupElement>& pinned,
                                         Schedule schedule);

// b_{R,i} for each (commitment vector, claim) pair.
std::vector<bool> VerifyReturns(const SystemSetup& setup,
                                const std::vector<std::vector<Commitment>>& coms,
                                const std::vector<mpz_class>& alphas,
                                const std::vector<Claim>& claims, Schedule schedule);

// Column-wise cipher layout for DieDec.
std::vector<std::vector<PsaCiphertext>> CipherColumns(const SystemSetup& setup,
                                                      const std::vector<PayBatch>& batches);

}  // namespace investcoin
