#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "investcoin/group.hpp"
#include "investcoin/psa.hpp"
#include "investcoin/random.hpp"

namespace investcoin {

using InvestorId = unsigned;

// Simulation view of the additive sharing: shares[a][b] is the share that
// investor ids[a] generated for investor ids[b]. In a protocol run each party
// only holds its own row and the column it received.
struct ShareMatrix {
  std::vector<InvestorId> ids;
  std::vector<std::vector<Exponent>> shares;

  std::size_t index_of(InvestorId id) const;
};

// entries[a][b] = PSAEnc_{shares[a][b]}(tag, 0), published by ids[b] for
// every share it received.
struct Blackboard {
  std::string tag;
  std::vector<InvestorId> ids;
  std::vector<std::vector<GroupElement>> entries;

  std::size_t index_of(InvestorId id) const;
};

struct KeygenResult {
  ShareMatrix matrix;
  std::vector<PsaKey> investor_keys;  // aligned with matrix.ids
  std::vector<Exponent> column_sums;  // values each investor reported to the administrator
  PsaKey admin_key;
  Blackboard board;
  std::size_t message_count = 0;
};

// One round of n-1 out of n additive sharing over ids 1..n.
KeygenResult RunKeygen(const GroupParams& params, const OracleTable& oracle,
                       const std::string& board_tag, unsigned n, Drbg& rng);

Blackboard PublishBlackboard(const GroupParams& params, const OracleTable& oracle,
                             const std::string& tag, const ShareMatrix& matrix);

// Per-column verdicts: PSADec_{-column_sums[b]}(tag, column b) == 0.
std::vector<bool> VerifyBlackboard(const GroupParams& params, const OracleTable& oracle,
                                   const Blackboard& board,
                                   const std::vector<Exponent>& column_sums);

// prod_b entries[a][b] for investor `id`: the mandated c_{i,0}.
PsaCiphertext PinnedZeroCipher(const GroupParams& params, const Blackboard& board, InvestorId id);

struct KeyUpdateReport {
  std::size_t message_count = 0;
  std::vector<InvestorId> removed;
  std::vector<InvestorId> joined;
};

// Keeps the share matrix, the administrator's view and the board in step
// across join/leave/fail events. Updates cost O(n) messages: 3n+1 for a join,
// one per survivor for a removal.
class KeyNetwork {
 public:
  static constexpr std::size_t kMessagesPerInvestorBound = 4;

  KeyNetwork(const GroupParams& params, const OracleTable& oracle, std::string board_tag,
             unsigned n, Drbg rng);

  KeyUpdateReport Join();
  KeyUpdateReport Leave(InvestorId id);
  // Throws ProtocolError(kEmptyNetwork) if nobody survives.
  KeyUpdateReport Fail(const std::vector<InvestorId>& ids);

  const std::vector<InvestorId>& ids() const { return matrix_.ids; }
  std::size_t size() const { return matrix_.ids.size(); }
  PsaKey investor_key(InvestorId id) const;
  const PsaKey& admin_key() const { return admin_key_; }
  const std::vector<Exponent>& column_sums() const { return column_sums_; }
  const Blackboard& board() const { return board_; }
  const ShareMatrix& matrix() const { return matrix_; }
  std::size_t keygen_messages() const { return keygen_messages_; }

  // s_0 + sum s_i == 0 mod pq over the current investors.
  bool ZeroSum() const;

 private:
  KeyUpdateReport Remove(const std::vector<InvestorId>& ids);
  void RecomputeAdminKey();

  const GroupParams* params_;
  const OracleTable* oracle_;
  Drbg rng_;
  ShareMatrix matrix_;
  std::vector<Exponent> column_sums_;
  PsaKey admin_key_;
  Blackboard board_;
  InvestorId next_id_ = 1;
  std::size_t keygen_messages_ = 0;
};

}  // namespace investcoin
