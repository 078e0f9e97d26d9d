#include "investcoin/keygen.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "investcoin/errors.hpp"

namespace investcoin {
namespace {

std::size_t IndexIn(const std::vector<InvestorId>& ids, InvestorId id) {
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) {
    throw std::out_of_range("unknown investor id " + std::to_string(id));
  }
  return static_cast<std::size_t>(it - ids.begin());
}

Exponent RowSum(const GroupParams& params, const ShareMatrix& matrix, std::size_t row) {
  mpz_class sum = 0;
  for (const auto& share : matrix.shares[row]) {
    sum += share.value();
  }
  return params.exp(sum);
}

Exponent ColumnSum(const GroupParams& params, const ShareMatrix& matrix, std::size_t col) {
  mpz_class sum = 0;
  for (const auto& row : matrix.shares) {
    sum += row[col].value();
  }
  return params.exp(sum);
}

}  // namespace

std::size_t ShareMatrix::index_of(InvestorId id) const { return IndexIn(ids, id); }
std::size_t Blackboard::index_of(InvestorId id) const { return IndexIn(ids, id); }

KeygenResult RunKeygen(const GroupParams& params, const OracleTable& oracle,
                       const std::string& board_tag, unsigned n, Drbg& rng) {
  if (n == 0) {
    throw std::invalid_argument("keygen needs at least one investor");
  }
  KeygenResult result;
  result.matrix.ids.resize(n);
  result.matrix.shares.assign(n, std::vector<Exponent>(n));
  for (unsigned a = 0; a < n; ++a) {
    result.matrix.ids[a] = a + 1;
    Drbg party = rng.Fork("keygen/investor", a + 1);
    for (unsigned b = 0; b < n; ++b) {
      result.matrix.shares[a][b] = params.exp(party.UniformBelow(params.exp_modulus));
    }
  }
  // Investor a sends n-1 shares to its peers and one column sum to the
  // administrator: n^2 messages in total.
  result.message_count = static_cast<std::size_t>(n) * n;

  mpz_class total = 0;
  for (unsigned b = 0; b < n; ++b) {
    result.column_sums.push_back(ColumnSum(params, result.matrix, b));
    total += result.column_sums.back().value();
  }
  result.admin_key = PsaKey{params.exp(-total)};
  for (unsigned a = 0; a < n; ++a) {
    result.investor_keys.push_back(PsaKey{RowSum(params, result.matrix, a)});
  }
  result.board = PublishBlackboard(params, oracle, board_tag, result.matrix);
  return result;
}

Blackboard PublishBlackboard(const GroupParams& params, const OracleTable& oracle,
                             const std::string& tag, const ShareMatrix& matrix) {
  const GroupElement base = HashToGroup(oracle, params, tag);
  Blackboard board;
  board.tag = tag;
  board.ids = matrix.ids;
  board.entries.resize(matrix.shares.size());
  for (std::size_t a = 0; a < matrix.shares.size(); ++a) {
    for (const auto& share : matrix.shares[a]) {
      board.entries[a].push_back(PsaEncWithBase(params, base, PsaKey{share}, 0));
    }
  }
  return board;
}

std::vector<bool> VerifyBlackboard(const GroupParams& params, const OracleTable& oracle,
                                   const Blackboard& board,
                                   const std::vector<Exponent>& column_sums) {
  const std::size_t n = board.ids.size();
  if (column_sums.size() != n || board.entries.size() != n) {
    return std::vector<bool>(n, false);
  }
  std::vector<bool> verdicts(n, false);
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<PsaCiphertext> column;
    bool shaped = true;
    for (std::size_t a = 0; a < n; ++a) {
      if (board.entries[a].size() != n) {
        shaped = false;
        break;
      }
      column.push_back(PsaCiphertext{board.entries[a][b], board.tag});
    }
    if (!shaped) {
      continue;
    }
    try {
      const PsaKey key{params.exp(-column_sums[b].value())};
      verdicts[b] = PsaDec(params, oracle, key, board.tag, column, 0) == 0;
    } catch (const ProtocolError&) {
      verdicts[b] = false;
    }
  }
  return verdicts;
}

PsaCiphertext PinnedZeroCipher(const GroupParams& params, const Blackboard& board, InvestorId id) {
  const std::size_t a = board.index_of(id);
  GroupElement acc = Identity();
  for (const auto& entry : board.entries[a]) {
    acc = Mul(params, acc, entry);
  }
  return PsaCiphertext{acc, board.tag};
}

KeyNetwork::KeyNetwork(const GroupParams& params, const OracleTable& oracle,
                       std::string board_tag, unsigned n, Drbg rng)
    : params_(&params), oracle_(&oracle), rng_(std::move(rng)) {
  KeygenResult keygen = RunKeygen(params, oracle, board_tag, n, rng_);
  matrix_ = std::move(keygen.matrix);
  column_sums_ = std::move(keygen.column_sums);
  admin_key_ = keygen.admin_key;
  board_ = std::move(keygen.board);
  keygen_messages_ = keygen.message_count;
  next_id_ = n + 1;
}

PsaKey KeyNetwork::investor_key(InvestorId id) const {
  return PsaKey{RowSum(*params_, matrix_, matrix_.index_of(id))};
}

void KeyNetwork::RecomputeAdminKey() {
  mpz_class total = 0;
  for (const auto& sum : column_sums_) {
    total += sum.value();
  }
  admin_key_ = PsaKey{params_->exp(-total)};
}

bool KeyNetwork::ZeroSum() const {
  mpz_class total = admin_key_.s.value();
  for (InvestorId id : matrix_.ids) {
    total += investor_key(id).s.value();
  }
  return params_->exp(total).value() == 0;
}

KeyUpdateReport KeyNetwork::Join() {
  const GroupParams& params = *params_;
  const InvestorId joiner = next_id_++;
  const std::size_t n = matrix_.ids.size();
  Drbg joiner_rng = rng_.Fork("join/joiner", joiner);

  // Existing investor a draws s_{a,new}; its key (row sum) absorbs it.
  for (std::size_t a = 0; a < n; ++a) {
    Drbg party = rng_.Fork("join/peer", (static_cast<uint64_t>(joiner) << 32) | matrix_.ids[a]);
    matrix_.shares[a].push_back(params.exp(party.UniformBelow(params.exp_modulus)));
  }
  std::vector<Exponent> joiner_row;
  for (std::size_t b = 0; b <= n; ++b) {
    joiner_row.push_back(params.exp(joiner_rng.UniformBelow(params.exp_modulus)));
  }
  matrix_.shares.push_back(std::move(joiner_row));
  matrix_.ids.push_back(joiner);

  // Existing investors report their enlarged column sums, the joiner its own.
  for (std::size_t b = 0; b < n; ++b) {
    column_sums_[b] =
        params.exp(column_sums_[b].value() + matrix_.shares[n][b].value());
  }
  column_sums_.push_back(ColumnSum(params, matrix_, n));
  RecomputeAdminKey();
  board_ = PublishBlackboard(params, *oracle_, board_.tag, matrix_);

  KeyUpdateReport report;
  report.joined.push_back(joiner);
  // n shares joiner -> peers, n shares peers -> joiner, n + 1 column sums.
  report.message_count = 3 * n + 1;
  return report;
}

KeyUpdateReport KeyNetwork::Leave(InvestorId id) { return Remove({id}); }

KeyUpdateReport KeyNetwork::Fail(const std::vector<InvestorId>& ids) { return Remove(ids); }

KeyUpdateReport KeyNetwork::Remove(const std::vector<InvestorId>& ids) {
  const GroupParams& params = *params_;
  const std::set<InvestorId> gone(ids.begin(), ids.end());
  for (InvestorId id : gone) {
    (void)matrix_.index_of(id);
  }
  if (gone.size() >= matrix_.ids.size()) {
    throw ProtocolError(ErrorCode::kEmptyNetwork, "no investors would survive the update");
  }

  std::vector<std::size_t> keep;
  std::vector<std::size_t> drop;
  for (std::size_t a = 0; a < matrix_.ids.size(); ++a) {
    (gone.count(matrix_.ids[a]) ? drop : keep).push_back(a);
  }

  // Each survivor b reports the sum of shares it received from the departed
  // set; the administrator subtracts it from b's column sum. Survivors drop
  // the shares they generated for the departed set from their own keys.
  std::vector<Exponent> new_sums;
  for (std::size_t b : keep) {
    mpz_class received = 0;
    for (std::size_t a : drop) {
      received += matrix_.shares[a][b].value();
    }
    new_sums.push_back(params.exp(column_sums_[b].value() - received));
  }

  ShareMatrix next;
  for (std::size_t a : keep) {
    next.ids.push_back(matrix_.ids[a]);
    std::vector<Exponent> row;
    for (std::size_t b : keep) {
      row.push_back(matrix_.shares[a][b]);
    }
    next.shares.push_back(std::move(row));
  }
  matrix_ = std::move(next);
  column_sums_ = std::move(new_sums);
  RecomputeAdminKey();

  Blackboard board;
  board.tag = board_.tag;
  board.ids = matrix_.ids;
  for (std::size_t a : keep) {
    std::vector<GroupElement> row;
    for (std::size_t b : keep) {
      row.push_back(board_.entries[a][b]);
    }
    board.entries.push_back(std::move(row));
  }
  board_ = std::move(board);

  KeyUpdateReport report;
  report.removed.assign(gone.begin(), gone.end());
  report.message_count = keep.size();
  return report;
}

}  // namespace investcoin
