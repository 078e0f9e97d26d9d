#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "investcoin/kernels.hpp"
#include "investcoin/protocol.hpp"

namespace investcoin {

struct Detection {
  std::string phase;
  InvestorId investor = 0;  // 0 when the event is not tied to an investor
  unsigned project = 0;     // 0 when not tied to a project
  std::string reason;
  std::string detail;
};

struct InvestorVerdict {
  InvestorId id = 0;
  bool submitted = false;
  std::vector<bool> range_ok;
  bool pinned_ok = false;
  bool consistency = false;
  bool paid = false;
  std::optional<bool> returned;  // unset when returns were not evaluated
  mpz_class payment;             // C_i, counted only when paid
  mpz_class payout;              // E_i, counted only when returned

  // All payment-side checks passed; the investor takes part in returns.
  bool eligible() const;
};

struct RoundVerdict {
  bool accepted = false;
  std::optional<ErrorCode> abort;
  std::vector<mpz_class> aggregates;  // X_0..X_lambda
  std::vector<mpz_class> alphas;      // alpha_1..alpha_lambda
  std::vector<InvestorVerdict> investors;
  std::vector<Detection> detections;
  std::map<std::string, mpz_class> ledger;  // nonzero balance changes

  bool clean() const { return accepted && detections.empty(); }
};

std::string InvestorAccount(InvestorId id);
std::string ProjectAccount(unsigned j);

// sum_i C_i = sum_j X_j and sum_i E_i = sum_j alpha_j X_j over a round in
// which every investor passed.
bool ConservationHolds(const RoundVerdict& verdict);

// Transfer of part of one investment between two investors.
// Both parties submit com' = Com(delta, rho); the optional proofs cover the
// two updated commitments.
struct TransferRequest {
  std::size_t sequence = 0;
  InvestorId from = 0;
  InvestorId to = 0;
  unsigned project = 0;
  Commitment from_com;
  Commitment to_com;
  bool range_recheck = false;
  std::optional<RangeProof> from_proof;
  std::optional<RangeProof> to_proof;
};

std::string TransferContext(std::size_t sequence, InvestorId investor, unsigned project);

// Investor side. rho is the randomness both parties agreed on. A party that
// cannot prove its updated holding honestly submits a forged proof.
TransferRequest PrepareTransfer(const SystemSetup& setup, const InvestorState& from,
                                const InvestorState& to, unsigned project, const mpz_class& delta,
                                const mpz_class& rho, std::size_t sequence, bool range_recheck,
                                Drbg& rng);

// Local state update after the administrator accepted the transfer.
void SettleTransfer(InvestorState& from, InvestorState& to, unsigned project,
                    const mpz_class& delta, const mpz_class& rho);

// Administrator state machine for one round. Phases must run in order:
// CheckBoards, ReceivePayments, ApplyTransfer*, PublishAlphas, ReceiveReturns.
class Administrator {
 public:
  Administrator(const SystemSetup& setup, const AdminSecret& admin, Blackboard board,
                Blackboard board_tilde, Schedule schedule = Schedule::kSerial);

  // Returns false and records detections if any blackboard column fails.
  bool CheckBoards();
  void ReceivePayments(const std::vector<PayBatch>& batches);
  // Returns the failure code, or nullopt when the transfer was applied.
  std::optional<ErrorCode> ApplyTransfer(const TransferRequest& request);
  // Throws ProtocolError(kReturnFactorOutOfRange).
  void PublishAlphas(const std::vector<mpz_class>& alphas);
  void ReceiveReturns(const std::vector<ReturnBatch>& batches);

  const RoundVerdict& verdict() const { return verdict_; }
  const std::vector<Commitment>& commitments(InvestorId id) const;

 private:
  InvestorVerdict* Find(InvestorId id);
  void Detect(std::string phase, InvestorId investor, unsigned project, std::string reason,
              std::string detail = {});
  void Credit(const std::string& account, const mpz_class& amount);

  const SystemSetup* setup_;
  const AdminSecret* admin_;
  Blackboard board_;
  Blackboard board_tilde_;
  Schedule schedule_;
  std::map<InvestorId, std::vector<Commitment>> coms_;
  RoundVerdict verdict_;
};

}  // namespace investcoin
