#include "investcoin/round.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "investcoin/adversary.hpp"

namespace investcoin {

bool InvestorVerdict::eligible() const {
  return submitted && pinned_ok && consistency && paid &&
         std::all_of(range_ok.begin(), range_ok.end(), [](bool b) { return b; });
}

std::string InvestorAccount(InvestorId id) { return "investor/" + std::to_string(id); }
std::string ProjectAccount(unsigned j) { return "project/" + std::to_string(j); }

bool ConservationHolds(const RoundVerdict& verdict) {
  if (!verdict.accepted || verdict.aggregates.empty()) {
    return false;
  }
  mpz_class paid = 0;
  mpz_class returned = 0;
  for (const auto& inv : verdict.investors) {
    if (!inv.eligible() || !inv.returned.value_or(false)) {
      return false;
    }
    paid += inv.payment;
    returned += inv.payout;
  }
  mpz_class raised = 0;
  mpz_class owed = 0;
  for (std::size_t j = 1; j < verdict.aggregates.size(); ++j) {
    raised += verdict.aggregates[j];
    if (j - 1 < verdict.alphas.size()) {
      owed += verdict.alphas[j - 1] * verdict.aggregates[j];
    }
  }
  return paid == raised && returned == owed;
}

std::string TransferContext(std::size_t sequence, InvestorId investor, unsigned project) {
  return "investcoin/transfer/" + std::to_string(sequence) + "/" + std::to_string(investor) + "/" +
         std::to_string(project);
}

namespace {

RangeProof ProveHolding(const SystemSetup& setup, const mpz_class& x, const mpz_class& r,
                        std::string_view context, Drbg& rng) {
  const GroupParams& params = setup.params;
  if (x >= 0 && x <= params.m) {
    return RangeProve(params, setup.commit_key, x, r, params.l, context, rng);
  }
  if (x < 0) {
    return ForgeDigits(params, setup.commit_key, x, r, NegativeDigits(x, params.l), context, rng);
  }
  return ForgeLowBits(params, setup.commit_key, x, r, params.l, context, rng);
}

}  // namespace

TransferRequest PrepareTransfer(const SystemSetup& setup, const InvestorState& from,
                                const InvestorState& to, unsigned project, const mpz_class& delta,
                                const mpz_class& rho, std::size_t sequence, bool range_recheck,
                                Drbg& rng) {
  TransferRequest request;
  request.sequence = sequence;
  request.from = from.key.id;
  request.to = to.key.id;
  request.project = project;
  request.from_com = Commit(setup.params, setup.commit_key, delta, rho);
  request.to_com = request.from_com;
  request.range_recheck = range_recheck;
  if (range_recheck) {
    request.from_proof = ProveHolding(setup, from.amount(project) - delta, from.rand(project) - rho,
                                      TransferContext(sequence, from.key.id, project), rng);
    request.to_proof = ProveHolding(setup, to.amount(project) + delta, to.rand(project) + rho,
                                    TransferContext(sequence, to.key.id, project), rng);
  }
  return request;
}

void SettleTransfer(InvestorState& from, InvestorState& to, unsigned project,
                    const mpz_class& delta, const mpz_class& rho) {
  from.amounts[project] -= delta;
  from.randomness[project - 1] -= rho;
  to.amounts[project] += delta;
  to.randomness[project - 1] += rho;
}

Administrator::Administrator(const SystemSetup& setup, const AdminSecret& admin, Blackboard board,
                             Blackboard board_tilde, Schedule schedule)
    : setup_(&setup),
      admin_(&admin),
      board_(std::move(board)),
      board_tilde_(std::move(board_tilde)),
      schedule_(schedule) {
  for (InvestorId id : board_.ids) {
    InvestorVerdict inv;
    inv.id = id;
    verdict_.investors.push_back(std::move(inv));
  }
}

InvestorVerdict* Administrator::Find(InvestorId id) {
  for (auto& inv : verdict_.investors) {
    if (inv.id == id) return &inv;
  }
  return nullptr;
}

const std::vector<Commitment>& Administrator::commitments(InvestorId id) const {
  auto it = coms_.find(id);
  if (it == coms_.end()) {
    throw std::out_of_range("no commitments for investor " + std::to_string(id));
  }
  return it->second;
}

void Administrator::Detect(std::string phase, InvestorId investor, unsigned project,
                           std::string reason, std::string detail) {
  verdict_.detections.push_back(
      Detection{std::move(phase), investor, project, std::move(reason), std::move(detail)});
}

void Administrator::Credit(const std::string& account, const mpz_class& amount) {
  mpz_class& balance = verdict_.ledger[account];
  balance += amount;
  if (balance == 0) {
    verdict_.ledger.erase(account);
  }
}

bool Administrator::CheckBoards() {
  bool ok = true;
  const std::pair<const Blackboard*, const std::vector<Exponent>*> boards[] = {
      {&board_, &admin_->column_sums}, {&board_tilde_, &admin_->column_sums_tilde}};
  for (const auto& [board, sums] : boards) {
    const std::vector<bool> columns = VerifyBlackboard(setup_->params, setup_->oracle, *board, *sums);
    for (std::size_t b = 0; b < columns.size(); ++b) {
      if (!columns[b]) {
        ok = false;
        Detect("board", board->ids.at(b), 0, "BlackboardColumn", "tag " + board->tag);
      }
    }
  }
  return ok;
}

void Administrator::ReceivePayments(const std::vector<PayBatch>& batches) {
  const SystemSetup& setup = *setup_;
  std::vector<PayBatch> accepted;
  std::vector<GroupElement> pinned;
  for (const auto& batch : batches) {
    InvestorVerdict* inv = Find(batch.investor);
    if (inv == nullptr || inv->submitted) {
      Detect("pay", batch.investor, 0, "UnexpectedBatch");
      continue;
    }
    inv->submitted = true;
    accepted.push_back(batch);
    pinned.push_back(PinnedZeroCipher(setup.params, board_, batch.investor).c);
  }

  const std::vector<PaymentCheck> checks =
      VerifyPayments(setup, *admin_, accepted, pinned, schedule_);
  for (std::size_t k = 0; k < accepted.size(); ++k) {
    const PayBatch& batch = accepted[k];
    const PaymentCheck& check = checks[k];
    InvestorVerdict& inv = *Find(batch.investor);
    inv.range_ok = check.range_ok;
    inv.pinned_ok = check.pinned_ok;
    inv.consistency = check.consistency.ok;
    inv.paid = check.paid;
    coms_[batch.investor] = batch.bundle.coms;
    for (std::size_t j = 0; j < check.range_ok.size(); ++j) {
      if (!check.range_ok[j]) {
        Detect("tes", batch.investor, static_cast<unsigned>(j + 1), "RangeTest");
      }
    }
    if (!check.pinned_ok) {
      Detect("pay", batch.investor, 0, "PinnedCipherMismatch");
    }
    if (!check.consistency.ok) {
      Detect("pay", batch.investor, 0,
             std::string(ErrorCodeName(check.consistency.failure.value_or(
                 ErrorCode::kConsistencyAbort))));
    } else if (!check.paid) {
      Detect("pay", batch.investor, 0, "PaymentClaim");
    }
    if (inv.eligible()) {
      inv.payment = batch.claim.value;
      Credit(InvestorAccount(batch.investor), -batch.claim.value);
    }
  }
  for (const auto& inv : verdict_.investors) {
    if (!inv.submitted) {
      Detect("pay", inv.id, 0, "MissingCipher", "no payment batch");
    }
  }

  try {
    verdict_.aggregates = DieDec(setup, *admin_, CipherColumns(setup, accepted),
                                 verdict_.investors.size(), schedule_);
  } catch (const ProtocolError& e) {
    verdict_.accepted = false;
    verdict_.abort = e.code();
    verdict_.aggregates.clear();
    verdict_.ledger.clear();
    Detect("aggregate", 0, 0, std::string(ErrorCodeName(e.code())), e.what());
    return;
  }
  verdict_.accepted = true;
  for (unsigned j = 1; j <= setup.lambda(); ++j) {
    Credit(ProjectAccount(j), verdict_.aggregates[j]);
  }
}

std::optional<ErrorCode> Administrator::ApplyTransfer(const TransferRequest& request) {
  const SystemSetup& setup = *setup_;
  auto reject = [&](ErrorCode code, const std::string& detail) {
    Detect("transfer", request.from, request.project, std::string(ErrorCodeName(code)), detail);
    return std::optional<ErrorCode>(code);
  };
  InvestorVerdict* from = Find(request.from);
  InvestorVerdict* to = Find(request.to);
  if (!verdict_.accepted || from == nullptr || to == nullptr || request.from == request.to ||
      !from->eligible() || !to->eligible() || request.project == 0 ||
      request.project > setup.lambda() || setup.is_dummy(request.project)) {
    return reject(ErrorCode::kTransferMismatch, "transfer not admissible");
  }
  if (request.from_com != request.to_com || !IsMember(setup.params, request.from_com.com)) {
    return reject(ErrorCode::kTransferMismatch, "submitted commitments differ");
  }
  const std::size_t idx = request.project - 1;
  const GroupElement inverse = Inverse(setup.params, request.from_com.com);
  const Commitment updated_from{Mul(setup.params, coms_[request.from][idx].com, inverse)};
  const Commitment updated_to{Mul(setup.params, coms_[request.to][idx].com, request.to_com.com)};
  if (request.range_recheck) {
    const bool from_ok =
        request.from_proof &&
        RangeVerify(setup.params, setup.commit_key, updated_from, *request.from_proof,
                    setup.params.l, TransferContext(request.sequence, request.from, request.project))
            .accepted();
    const bool to_ok =
        request.to_proof &&
        RangeVerify(setup.params, setup.commit_key, updated_to, *request.to_proof, setup.params.l,
                    TransferContext(request.sequence, request.to, request.project))
            .accepted();
    if (!from_ok || !to_ok) {
      return reject(ErrorCode::kRangeRecheckFailed,
                    !from_ok ? "sender holding fails the range test"
                             : "receiver holding fails the range test");
    }
  }
  coms_[request.from][idx] = updated_from;
  coms_[request.to][idx] = updated_to;
  return std::nullopt;
}

void Administrator::PublishAlphas(const std::vector<mpz_class>& alphas) {
  ValidateAlphas(*setup_, alphas);
  verdict_.alphas = alphas;
}

void Administrator::ReceiveReturns(const std::vector<ReturnBatch>& batches) {
  if (!verdict_.accepted) {
    return;
  }
  std::vector<std::vector<Commitment>> coms;
  std::vector<Claim> claims;
  std::vector<InvestorVerdict*> owners;
  for (const auto& batch : batches) {
    InvestorVerdict* inv = Find(batch.investor);
    if (inv == nullptr || !inv->eligible() || inv->returned.has_value()) {
      Detect("return", batch.investor, 0, "UnexpectedBatch");
      continue;
    }
    inv->returned = false;
    coms.push_back(coms_[batch.investor]);
    claims.push_back(batch.claim);
    owners.push_back(inv);
  }
  const std::vector<bool> verdicts =
      VerifyReturns(*setup_, coms, verdict_.alphas, claims, schedule_);
  for (std::size_t k = 0; k < owners.size(); ++k) {
    owners[k]->returned = verdicts[k];
    if (verdicts[k]) {
      owners[k]->payout = claims[k].value;
      Credit(InvestorAccount(owners[k]->id), claims[k].value);
    } else {
      Detect("return", owners[k]->id, 0, "ReturnClaim");
    }
  }
  for (auto& inv : verdict_.investors) {
    if (inv.eligible() && !inv.returned.has_value()) {
      inv.returned = false;
      Detect("return", inv.id, 0, "MissingReturn");
    }
  }
  // Project debits only after every b_R is known.
  for (unsigned j = 1; j <= setup_->lambda(); ++j) {
    Credit(ProjectAccount(j), -verdict_.alphas[j - 1] * verdict_.aggregates[j]);
  }
}

}  // namespace investcoin
