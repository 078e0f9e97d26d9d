#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "investcoin/errors.hpp"
#include "investcoin/harness.hpp"

using namespace investcoin;

namespace {

constexpr int kAccepted = 0;
constexpr int kError = 1;
constexpr int kDetected = 2;

struct GlobalOptions {
  std::optional<std::string> seed;
  std::string config_path;
  std::string out_path;
  bool toy = false;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void WriteOutput(const GlobalOptions& g, const std::string& text) {
  if (g.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + g.out_path);
  out << text;
}

ScenarioConfig LoadConfig(const GlobalOptions& g) {
  ScenarioConfig config;
  if (!g.config_path.empty()) {
    config = ConfigFromJson(Json::parse(ReadFile(g.config_path)));
  } else if (g.toy) {
    config = ToyConfig("0");
  } else {
    config = DefaultConfig("0");
  }
  if (g.seed) config.seed = *g.seed;
  ValidateConfig(config);
  return config;
}

void PrintVerdict(const ScenarioResult& result) {
  const RoundVerdict& v = result.verdict;
  std::fprintf(stderr, "round %s", v.accepted ? "accepted" : "aborted");
  if (v.abort) std::fprintf(stderr, " (%s)", std::string(ErrorCodeName(*v.abort)).c_str());
  std::fprintf(stderr, ", %zu detection(s)\n", v.detections.size());
  for (const auto& d : v.detections) {
    std::fprintf(stderr, "  %s investor %u project %u: %s%s%s\n", d.phase.c_str(), d.investor,
                 d.project, d.reason.c_str(), d.detail.empty() ? "" : " - ", d.detail.c_str());
  }
  for (const auto& e : result.escapes) {
    std::fprintf(stderr, "  escaped: investor %u, %s\n", e.investor, e.detail.c_str());
  }
}

int FinishRound(const GlobalOptions& g, const ScenarioResult& result) {
  WriteOutput(g, result.transcript.Serialize());
  PrintVerdict(result);
  return result.verdict.clean() ? kAccepted : kDetected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Investcoin protocol simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::string seed;
  app.add_option("--seed", seed, "Scenario seed");
  app.add_option("--config", g.config_path, "Scenario config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_path, "Output file (default: standard output)");
  app.add_flag("--toy", g.toy, "Use the p = 23 preset");

  auto* gen = app.add_subcommand("gen-params", "Generate group parameters as JSON");

  auto* run = app.add_subcommand("run-round", "Run one honest round and write the transcript");

  auto* attack = app.add_subcommand("attack", "Run a round with one malicious investor");
  std::string behaviour_name;
  unsigned attacker = 1;
  unsigned attack_project = 1;
  std::string attack_delta = "1";
  std::string attack_field = "C";
  attack->add_option("behaviour", behaviour_name,
                     "mismatch | negative-amount | fresh-key | wrong-tags | inflate-claim | withhold")
      ->required();
  attack->add_option("--investor", attacker, "Malicious investor id");
  attack->add_option("--project", attack_project, "Targeted project");
  attack->add_option("--delta", attack_delta, "Deviation size");
  attack->add_option("--field", attack_field, "Claim field for inflate-claim: C, D, E or F");

  auto* transfer = app.add_subcommand("transfer", "Run a round with one stake transfer");
  unsigned from = 1;
  unsigned to = 2;
  unsigned transfer_project = 1;
  std::string transfer_delta = "1";
  bool recheck = false;
  transfer->add_option("--from", from, "Sending investor");
  transfer->add_option("--to", to, "Receiving investor");
  transfer->add_option("--project", transfer_project, "Project whose stake moves");
  transfer->add_option("--delta", transfer_delta, "Amount moved");
  transfer->add_flag("--recheck", recheck, "Range-test both updated holdings");

  auto* verify = app.add_subcommand("verify-transcript", "Re-run every administrator check");
  std::string transcript_path;
  verify->add_option("transcript", transcript_path, "Transcript file")
      ->required()
      ->check(CLI::ExistingFile);

  auto* oracle = app.add_subcommand("oracle-check", "Compare a round with the integer oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kAccepted : kError;
  }
  if (!seed.empty()) g.seed = seed;

  try {
    if (*gen) {
      const ScenarioConfig config = LoadConfig(g);
      const GroupParams params = g.toy && g.config_path.empty() ? ToyParams() : ParamsFor(config);
      WriteOutput(g, ToJson(params).dump(2) + "\n");
      return kAccepted;
    }
    if (*run) {
      ScenarioConfig config = LoadConfig(g);
      return FinishRound(g, RunScenario(config));
    }
    if (*attack) {
      ScenarioConfig config = LoadConfig(g);
      const auto behaviour = ParseBehaviour(behaviour_name);
      if (!behaviour) throw std::invalid_argument("unknown behaviour " + behaviour_name);
      const auto field = ParseClaimField(attack_field);
      if (!field) throw std::invalid_argument("unknown claim field " + attack_field);
      config.adversaries = {
          AdversarySpec{attacker, *behaviour, attack_project, mpz_class(attack_delta), *field}};
      ValidateConfig(config);
      return FinishRound(g, RunScenario(config));
    }
    if (*transfer) {
      ScenarioConfig config = LoadConfig(g);
      config.transfers.push_back(TransferSpec{from, to, transfer_project, mpz_class(transfer_delta)});
      config.options.range_recheck_on_transfer = config.options.range_recheck_on_transfer || recheck;
      ValidateConfig(config);
      const ScenarioResult result = RunScenario(config);
      const int code = FinishRound(g, result);
      const auto& outcome = result.transfer_results.back();
      std::fprintf(stderr, "transfer %s\n",
                   outcome ? std::string(ErrorCodeName(*outcome)).c_str() : "applied");
      return outcome ? kDetected : code;
    }
    if (*verify) {
      const TranscriptReport report = VerifyTranscript(Transcript::Parse(ReadFile(transcript_path)));
      for (const auto& p : report.problems) std::fprintf(stderr, "  %s\n", p.c_str());
      std::printf("%d\n", report.ok() ? 1 : 0);
      return report.ok() ? kAccepted : kDetected;
    }
    if (*oracle) {
      const ScenarioConfig config = LoadConfig(g);
      const ScenarioResult result = RunScenario(config);
      const OracleExpectation expected = OracleRound(config, result.params);
      bool match = result.verdict.clean() && result.verdict.aggregates == expected.aggregates;
      for (std::size_t i = 0; match && i < result.verdict.investors.size(); ++i) {
        match = result.verdict.investors[i].payment == expected.payments[i] &&
                result.verdict.investors[i].payout == expected.returns[i];
      }
      std::fprintf(stderr, "oracle %s: X =", match ? "agrees" : "disagrees");
      for (const auto& x : result.verdict.aggregates) std::fprintf(stderr, " %s", x.get_str().c_str());
      std::fprintf(stderr, "\n");
      return match ? kAccepted : kDetected;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return kError;
}
