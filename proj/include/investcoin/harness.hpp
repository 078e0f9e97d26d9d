#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "investcoin/adversary.hpp"
#include "investcoin/protocol.hpp"
#include "investcoin/round.hpp"
#include "investcoin/serialize.hpp"

namespace investcoin {

struct TransferSpec {
  InvestorId from = 0;
  InvestorId to = 0;
  unsigned project = 1;
  mpz_class delta = 0;
};

struct ScenarioOptions {
  bool range_recheck_on_transfer = false;
  bool full_range_commit_randomness = false;
  Schedule schedule = Schedule::kSerial;
};

struct ScenarioConfig {
  unsigned q_bits = 4;
  unsigned l = 2;
  unsigned n = 3;
  unsigned lambda = 3;
  std::string seed = "0";
  // n rows of lambda amounts; unset means drawn from the seed.
  std::optional<std::vector<std::vector<mpz_class>>> investments;
  // lambda return factors; unset means drawn from the seed.
  std::optional<std::vector<mpz_class>> alphas;
  std::vector<AdversarySpec> adversaries;
  std::vector<TransferSpec> transfers;
  ScenarioOptions options;
};

// p = 23 preset.
ScenarioConfig ToyConfig(std::string seed);
// q_bits 64, l 16, n 4, lambda 5.
ScenarioConfig DefaultConfig(std::string seed);

ScenarioConfig ConfigFromJson(const Json& json);
Json ToJson(const ScenarioConfig& config);

// Throws std::invalid_argument for duplicate or unknown adversary ids.
void ValidateConfig(const ScenarioConfig& config);

GroupParams ParamsFor(const ScenarioConfig& config);

// Investments and alphas after resolving "random" from the seed.
struct ResolvedInputs {
  std::vector<std::vector<mpz_class>> investments;  // n x lambda
  std::vector<mpz_class> alphas;                    // lambda
};

ResolvedInputs ResolveInputs(const ScenarioConfig& config, const GroupParams& params);

// One JSON object per message: phase, from, to, payload, sequence. The last
// record has phase "end" and carries the record count.
class Transcript {
 public:
  void Add(std::string phase, std::string from, std::string to, Json payload);
  void Close();
  const std::vector<Json>& records() const { return records_; }
  std::string Serialize() const;
  // Throws ParseError with a 1-based line number.
  static Transcript Parse(std::string_view text);

 private:
  std::vector<Json> records_;
};

struct MessageCounts {
  std::size_t keygen = 0;        // share and column-sum messages, first key family
  std::size_t keygen_tilde = 0;  // same for the randomness key family
  std::size_t pay_batches = 0;
  std::size_t return_batches = 0;
  std::size_t transfers = 0;
};

struct ScenarioResult {
  GroupParams params;
  Transcript transcript;
  RoundVerdict verdict;
  MessageCounts counts;
  // Adversaries that caused no detection, with the context of the escape.
  std::vector<Detection> escapes;
  std::vector<InvestorState> investors;  // final local states
  ResolvedInputs inputs;
  std::vector<std::optional<ErrorCode>> transfer_results;
};

// Runs setup, one investment round, transfers and returns. `params` skips
// parameter generation when given; it must match the config sizes.
ScenarioResult RunScenario(const ScenarioConfig& config, const GroupParams* params = nullptr);

// Integer-only expectation for an honest run of `config`.
struct OracleExpectation {
  std::vector<mpz_class> aggregates;  // X_0..X_lambda
  std::vector<mpz_class> payments;    // C_i
  std::vector<mpz_class> returns;     // E_i after transfers
  mpz_class total_paid;
  mpz_class total_returned;
  mpz_class weighted_aggregate;       // sum alpha_j X_j
};

OracleExpectation OracleRound(const ScenarioConfig& config, const GroupParams& params);

struct TranscriptReport {
  bool replay_matches = false;  // recomputed verdict equals the recorded one
  bool checks_pass = false;     // every administrator-side check accepted
  std::vector<std::string> problems;

  bool ok() const { return replay_matches && checks_pass; }
};

// Re-runs every administrator-side check from the recorded messages alone.
TranscriptReport VerifyTranscript(const Transcript& transcript);

}  // namespace investcoin
