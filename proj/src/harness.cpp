#include "investcoin/harness.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "investcoin/kernels.hpp"

namespace investcoin {
namespace {

constexpr std::string_view kAdmin = "admin";
constexpr std::string_view kEveryone = "all";

std::string Party(InvestorId id) { return "investor/" + std::to_string(id); }

unsigned ReadUnsigned(const Json& json) {
  if (json.is_string()) {
    return static_cast<unsigned>(std::stoul(json.get<std::string>()));
  }
  return json.get<unsigned>();
}

std::string_view ScheduleName(Schedule schedule) {
  return schedule == Schedule::kParallel ? "parallel" : "serial";
}

const AdversarySpec* FindAdversary(const ScenarioConfig& config, InvestorId id) {
  for (const auto& spec : config.adversaries) {
    if (spec.investor == id) return &spec;
  }
  return nullptr;
}

bool Admissible(const ScenarioConfig& config, const TransferSpec& t,
                const std::vector<std::vector<mpz_class>>& holdings, const mpz_class& m) {
  const mpz_class& from = holdings[t.from - 1][t.project - 1];
  const mpz_class& to = holdings[t.to - 1][t.project - 1];
  if (!config.options.range_recheck_on_transfer) return true;
  return t.delta >= 0 && from - t.delta >= 0 && from - t.delta <= m && to + t.delta >= 0 &&
         to + t.delta <= m;
}

void KeygenShares(const KeygenResult& keygen, const std::string& family, Transcript& transcript) {
  const std::size_t n = keygen.matrix.ids.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      transcript.Add("keygen", Party(keygen.matrix.ids[a]), Party(keygen.matrix.ids[b]),
                     Json{{"family", family}, {"share", EncodeInt(keygen.matrix.shares[a][b].value())}});
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    transcript.Add("keygen", Party(keygen.matrix.ids[b]), std::string(kAdmin),
                   Json{{"family", family}, {"column_sum", EncodeInt(keygen.column_sums[b].value())}});
  }
}

}  // namespace

ScenarioConfig ToyConfig(std::string seed) {
  ScenarioConfig config;
  config.seed = std::move(seed);
  return config;
}

ScenarioConfig DefaultConfig(std::string seed) {
  ScenarioConfig config;
  config.q_bits = 64;
  config.l = 16;
  config.n = 4;
  config.lambda = 5;
  config.seed = std::move(seed);
  return config;
}

ScenarioConfig ConfigFromJson(const Json& json) {
  ScenarioConfig config;
  if (json.contains("q_bits")) config.q_bits = ReadUnsigned(json.at("q_bits"));
  if (json.contains("l")) config.l = ReadUnsigned(json.at("l"));
  if (json.contains("n")) config.n = ReadUnsigned(json.at("n"));
  if (json.contains("lambda")) config.lambda = ReadUnsigned(json.at("lambda"));
  if (json.contains("seed")) {
    const Json& seed = json.at("seed");
    config.seed = seed.is_string() ? seed.get<std::string>() : seed.dump();
  }
  if (json.contains("investments") && json.at("investments") != "random") {
    std::vector<std::vector<mpz_class>> rows;
    for (const auto& row : json.at("investments")) rows.push_back(DecodeInts(row));
    config.investments = std::move(rows);
  }
  if (json.contains("alphas") && json.at("alphas") != "random") {
    config.alphas = DecodeInts(json.at("alphas"));
  }
  if (json.contains("adversaries")) {
    for (const auto& entry : json.at("adversaries")) {
      AdversarySpec spec;
      spec.investor = ReadUnsigned(entry.at("investor"));
      const auto behaviour = ParseBehaviour(entry.at("behaviour").get<std::string>());
      if (!behaviour) {
        throw std::invalid_argument("unknown behaviour " + entry.at("behaviour").dump());
      }
      spec.behaviour = *behaviour;
      if (entry.contains("project")) spec.project = ReadUnsigned(entry.at("project"));
      if (entry.contains("delta")) spec.delta = DecodeInt(entry.at("delta"));
      if (entry.contains("field")) {
        const auto field = ParseClaimField(entry.at("field").get<std::string>());
        if (!field) throw std::invalid_argument("unknown claim field " + entry.at("field").dump());
        spec.field = *field;
      }
      config.adversaries.push_back(spec);
    }
  }
  if (json.contains("transfers")) {
    for (const auto& entry : json.at("transfers")) {
      config.transfers.push_back(TransferSpec{ReadUnsigned(entry.at("from")),
                                              ReadUnsigned(entry.at("to")),
                                              ReadUnsigned(entry.at("project")),
                                              DecodeInt(entry.at("delta"))});
    }
  }
  if (json.contains("options")) {
    const Json& options = json.at("options");
    config.options.range_recheck_on_transfer =
        options.value("range_recheck_on_transfer", false);
    config.options.full_range_commit_randomness =
        options.value("full_range_commit_randomness", false);
    config.options.schedule = options.value("schedule", std::string("serial")) == "parallel"
                                  ? Schedule::kParallel
                                  : Schedule::kSerial;
  }
  return config;
}

Json ToJson(const ScenarioConfig& config) {
  Json out{{"q_bits", config.q_bits}, {"l", config.l},          {"n", config.n},
           {"lambda", config.lambda}, {"seed", config.seed}};
  if (config.investments) {
    Json rows = Json::array();
    for (const auto& row : *config.investments) rows.push_back(EncodeInts(row));
    out["investments"] = rows;
  } else {
    out["investments"] = "random";
  }
  out["alphas"] = config.alphas ? EncodeInts(*config.alphas) : Json("random");
  Json adversaries = Json::array();
  for (const auto& spec : config.adversaries) {
    adversaries.push_back(Json{{"investor", spec.investor},
                               {"behaviour", std::string(BehaviourName(spec.behaviour))},
                               {"project", spec.project},
                               {"delta", EncodeInt(spec.delta)},
                               {"field", std::string(ClaimFieldName(spec.field))}});
  }
  out["adversaries"] = adversaries;
  Json transfers = Json::array();
  for (const auto& t : config.transfers) {
    transfers.push_back(
        Json{{"from", t.from}, {"to", t.to}, {"project", t.project}, {"delta", EncodeInt(t.delta)}});
  }
  out["transfers"] = transfers;
  out["options"] = Json{{"range_recheck_on_transfer", config.options.range_recheck_on_transfer},
                        {"full_range_commit_randomness", config.options.full_range_commit_randomness},
                        {"schedule", std::string(ScheduleName(config.options.schedule))}};
  return out;
}

void ValidateConfig(const ScenarioConfig& config) {
  std::set<InvestorId> seen;
  for (const auto& spec : config.adversaries) {
    if (spec.investor == 0 || spec.investor > config.n) {
      throw std::invalid_argument("adversary id " + std::to_string(spec.investor) +
                                  " is not an investor");
    }
    if (!seen.insert(spec.investor).second) {
      throw std::invalid_argument("adversary id " + std::to_string(spec.investor) + " repeated");
    }
  }
  for (const auto& t : config.transfers) {
    if (t.from == 0 || t.from > config.n || t.to == 0 || t.to > config.n || t.from == t.to) {
      throw std::invalid_argument("transfer between invalid investors");
    }
    if (t.project == 0 || t.project + 2 > config.lambda) {
      throw std::invalid_argument("transfer project must be a real project");
    }
  }
  if (config.investments) {
    if (config.investments->size() != config.n) {
      throw std::invalid_argument("investments need one row per investor");
    }
    for (const auto& row : *config.investments) {
      if (row.size() != config.lambda) {
        throw std::invalid_argument("investment rows need one amount per project");
      }
    }
  }
  if (config.alphas && config.alphas->size() != config.lambda) {
    throw std::invalid_argument("alphas need one factor per project");
  }
}

GroupParams ParamsFor(const ScenarioConfig& config) {
  return GenerateParams(config.q_bits, config.l, config.n, config.lambda, config.seed);
}

ResolvedInputs ResolveInputs(const ScenarioConfig& config, const GroupParams& params) {
  ResolvedInputs inputs;
  const Drbg root(config.seed, "investcoin/scenario");
  const unsigned lambda = config.lambda;
  if (config.investments) {
    inputs.investments = *config.investments;
  } else {
    Drbg rng = root.Fork("investments");
    for (unsigned i = 0; i < config.n; ++i) {
      std::vector<mpz_class> row(lambda, 0);
      for (unsigned j = 1; j + 2 <= lambda; ++j) {
        row[j - 1] = rng.UniformIn(0, params.m);
      }
      inputs.investments.push_back(std::move(row));
    }
  }
  if (config.alphas) {
    inputs.alphas = *config.alphas;
  } else {
    Drbg rng = root.Fork("alphas");
    inputs.alphas.assign(lambda, 1);
    for (unsigned j = 1; j + 2 <= lambda; ++j) {
      inputs.alphas[j - 1] = rng.UniformIn(-params.q_prime, params.q_prime);
    }
  }
  return inputs;
}

void Transcript::Add(std::string phase, std::string from, std::string to, Json payload) {
  const std::size_t sequence = records_.size();
  records_.push_back(Json{{"phase", std::move(phase)},
                          {"from", std::move(from)},
                          {"to", std::move(to)},
                          {"payload", std::move(payload)},
                          {"sequence", sequence}});
}

void Transcript::Close() {
  Add("end", std::string(kAdmin), std::string(kEveryone), Json{{"records", records_.size() + 1}});
}

std::string Transcript::Serialize() const {
  std::string out;
  for (const auto& record : records_) {
    out += record.dump();
    out += '\n';
  }
  return out;
}

Transcript Transcript::Parse(std::string_view text) {
  Transcript transcript;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool ended = false;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (ended) {
      throw ParseError(line_no, "record after the end record");
    }
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::exception& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    for (const char* field : {"phase", "from", "to", "payload", "sequence"}) {
      if (!record.is_object() || !record.contains(field)) {
        throw ParseError(line_no, std::string("missing field '") + field + "'");
      }
    }
    if (!record.at("sequence").is_number_unsigned() ||
        record.at("sequence").get<std::size_t>() != line_no - 1) {
      throw ParseError(line_no, "sequence number out of order");
    }
    if (record.at("phase") == "end") {
      if (record.at("payload").value("records", std::size_t{0}) != line_no) {
        throw ParseError(line_no, "end record count disagrees with the transcript");
      }
      ended = true;
    }
    transcript.records_.push_back(std::move(record));
  }
  if (!ended) {
    throw ParseError(line_no + 1, "transcript truncated: no end record");
  }
  return transcript;
}

ScenarioResult RunScenario(const ScenarioConfig& config, const GroupParams* params_in) {
  ValidateConfig(config);
  ScenarioResult result;
  result.params = params_in != nullptr ? *params_in : ParamsFor(config);
  const GroupParams& params = result.params;
  if (params.l != config.l || params.n != config.n || params.lambda != config.lambda) {
    throw std::invalid_argument("supplied parameters do not match the scenario sizes");
  }
  const RandomnessRange range = config.options.full_range_commit_randomness
                                    ? RandomnessRange::kFull
                                    : RandomnessRange::kInvestmentRange;
  const Schedule schedule = config.options.schedule;
  Transcript& transcript = result.transcript;
  const Drbg root(config.seed, "investcoin/scenario");

  Drbg setup_rng = root.Fork("setup");
  const Deployment deployment = DieSet(params, setup_rng);
  const SystemSetup& setup = deployment.setup;
  transcript.Add("setup", std::string(kAdmin), std::string(kEveryone),
                 Json{{"params", ToJson(params)},
                      {"oracle", ToJson(setup.oracle)},
                      {"options", Json{{"range_recheck_on_transfer",
                                        config.options.range_recheck_on_transfer}}}});
  transcript.Add("setup", std::string(kAdmin), std::string(kAdmin),
                 Json{{"betas", EncodeInts(deployment.admin.betas)},
                      {"s0", EncodeInt(deployment.admin.s0.s.value())},
                      {"s0_tilde", EncodeInt(deployment.admin.s0_tilde.s.value())}});

  KeygenShares(deployment.keygen, "s", transcript);
  KeygenShares(deployment.keygen_tilde, "s_tilde", transcript);
  result.counts.keygen = deployment.keygen.message_count;
  result.counts.keygen_tilde = deployment.keygen_tilde.message_count;
  const std::size_t n_squared = static_cast<std::size_t>(config.n) * config.n;
  if (result.counts.keygen != n_squared || result.counts.keygen_tilde != n_squared) {
    throw std::logic_error("keygen message count differs from n^2");
  }
  transcript.Add("board", "investors", std::string(kEveryone),
                 Json{{"family", "s"}, {"board", ToJson(deployment.keygen.board)}});
  transcript.Add("board", "investors", std::string(kEveryone),
                 Json{{"family", "s_tilde"}, {"board", ToJson(deployment.keygen_tilde.board)}});

  result.inputs = ResolveInputs(config, params);
  std::vector<InvestorState>& investors = result.investors;
  for (std::size_t i = 0; i < config.n; ++i) {
    Drbg rng = root.Fork("investor/randomness", deployment.investor_keys[i].id);
    investors.push_back(
        MakeInvestor(setup, deployment.investor_keys[i], result.inputs.investments[i], rng, range));
  }

  // Batch 1: ciphers, commitments, range proofs, payment claim.
  std::vector<InvestorState> honest;
  std::vector<Drbg> honest_rngs;
  for (const auto& investor : investors) {
    if (FindAdversary(config, investor.key.id) == nullptr) {
      honest.push_back(investor);
      honest_rngs.push_back(root.Fork("investor/proofs", investor.key.id));
    }
  }
  const std::vector<PayBatch> honest_batches =
      BuildPayBatches(setup, honest, honest_rngs, schedule);
  std::vector<PayBatch> batches;
  std::size_t next_honest = 0;
  for (auto& investor : investors) {
    const AdversarySpec* spec = FindAdversary(config, investor.key.id);
    if (spec == nullptr) {
      batches.push_back(honest_batches[next_honest++]);
      continue;
    }
    Drbg rng = root.Fork("adversary", investor.key.id);
    if (auto batch = AdversarialPayBatch(setup, investor, *spec, rng)) {
      batches.push_back(std::move(*batch));
    }
    if (spec->behaviour == Behaviour::kNegativeAmount) {
      investor.amounts[spec->project] = -abs(spec->delta);
    }
  }
  for (const auto& batch : batches) {
    transcript.Add("pay", Party(batch.investor), std::string(kAdmin), ToJson(batch));
  }
  result.counts.pay_batches = batches.size();

  Administrator admin(setup, deployment.admin, deployment.keygen.board,
                      deployment.keygen_tilde.board, schedule);
  admin.CheckBoards();
  admin.ReceivePayments(batches);

  for (std::size_t seq = 0; seq < config.transfers.size(); ++seq) {
    const TransferSpec& t = config.transfers[seq];
    InvestorState& from = investors[t.from - 1];
    InvestorState& to = investors[t.to - 1];
    Drbg rng = root.Fork("transfer", seq);
    const mpz_class rho = rng.UniformIn(0, params.m);
    const TransferRequest request = PrepareTransfer(setup, from, to, t.project, t.delta, rho, seq,
                                                    config.options.range_recheck_on_transfer, rng);
    transcript.Add("transfer", Party(t.from), std::string(kAdmin), ToJson(request));
    const std::optional<ErrorCode> outcome = admin.ApplyTransfer(request);
    if (!outcome) {
      SettleTransfer(from, to, t.project, t.delta, rho);
    }
    result.transfer_results.push_back(outcome);
    ++result.counts.transfers;
  }

  admin.PublishAlphas(result.inputs.alphas);
  transcript.Add("alphas", std::string(kAdmin), std::string(kEveryone),
                 Json{{"alphas", EncodeInts(result.inputs.alphas)}});

  // Batch 2: return claims from investors whose payment was accepted.
  std::vector<ReturnBatch> returns;
  if (admin.verdict().accepted) {
    for (const auto& inv : admin.verdict().investors) {
      if (!inv.eligible()) continue;
      const InvestorState& investor = investors[inv.id - 1];
      const AdversarySpec* spec = FindAdversary(config, inv.id);
      const Claim claim = spec != nullptr
                              ? AdversarialReturnClaim(investor, result.inputs.alphas, *spec)
                              : ReturnClaim(investor, result.inputs.alphas);
      returns.push_back(ReturnBatch{inv.id, claim});
    }
  }
  for (const auto& batch : returns) {
    transcript.Add("return", Party(batch.investor), std::string(kAdmin), ToJson(batch));
  }
  result.counts.return_batches = returns.size();
  admin.ReceiveReturns(returns);

  result.verdict = admin.verdict();
  transcript.Add("verdict", std::string(kAdmin), std::string(kEveryone), ToJson(result.verdict));

  for (const auto& spec : config.adversaries) {
    if (spec.behaviour == Behaviour::kHonest) continue;
    const bool caught =
        std::any_of(result.verdict.detections.begin(), result.verdict.detections.end(),
                    [&](const Detection& d) { return d.investor == spec.investor; }) ||
        result.verdict.abort.has_value();
    if (!caught) {
      result.escapes.push_back(Detection{
          "summary", spec.investor, spec.project, "Escaped",
          std::string(BehaviourName(spec.behaviour)) + " undetected; per-trial escape bound 1/(2q'+1) = 1/" +
              mpz_class(2 * params.q_prime + 1).get_str()});
    }
  }
  Json escapes = Json::array();
  for (const auto& e : result.escapes) {
    escapes.push_back(Json{{"investor", e.investor}, {"project", e.project}, {"detail", e.detail}});
  }
  transcript.Add("summary", std::string(kAdmin), std::string(kEveryone),
                 Json{{"escapes", escapes}});
  transcript.Close();
  return result;
}

OracleExpectation OracleRound(const ScenarioConfig& config, const GroupParams& params) {
  ValidateConfig(config);
  const ResolvedInputs inputs = ResolveInputs(config, params);
  std::vector<std::vector<mpz_class>> holdings = inputs.investments;
  for (const auto& t : config.transfers) {
    if (Admissible(config, t, holdings, params.m)) {
      holdings[t.from - 1][t.project - 1] -= t.delta;
      holdings[t.to - 1][t.project - 1] += t.delta;
    }
  }
  OracleExpectation out;
  out.aggregates.assign(config.lambda + 1, 0);
  for (const auto& row : inputs.investments) {
    mpz_class paid = 0;
    for (unsigned j = 1; j <= config.lambda; ++j) {
      out.aggregates[j] += row[j - 1];
      paid += row[j - 1];
    }
    out.payments.push_back(paid);
    out.total_paid += paid;
  }
  for (const auto& row : holdings) {
    mpz_class returned = 0;
    for (unsigned j = 1; j <= config.lambda; ++j) {
      returned += inputs.alphas[j - 1] * row[j - 1];
    }
    out.returns.push_back(returned);
    out.total_returned += returned;
  }
  for (unsigned j = 1; j <= config.lambda; ++j) {
    out.weighted_aggregate += inputs.alphas[j - 1] * out.aggregates[j];
  }
  return out;
}

TranscriptReport VerifyTranscript(const Transcript& transcript) {
  TranscriptReport report;
  auto problem = [&](std::string what) { report.problems.push_back(std::move(what)); };
  const auto& records = transcript.records();
  std::map<std::string, std::vector<const Json*>> by_phase;
  for (const auto& record : records) {
    by_phase[record.at("phase").get<std::string>()].push_back(&record);
  }
  auto phase = [&](const std::string& name) -> const std::vector<const Json*>& {
    return by_phase[name];
  };
  try {
    if (phase("setup").size() != 2 || phase("board").size() != 2 || phase("alphas").size() != 1 ||
        phase("verdict").size() != 1) {
      problem("transcript phases are incomplete");
      return report;
    }
    const Json& pub = phase("setup")[0]->at("payload");
    const Json& secret = phase("setup")[1]->at("payload");

    SystemSetup setup;
    setup.params = ParamsFromJson(pub.at("params"));
    const GroupParams& params = setup.params;
    setup.oracle = OracleFromJson(pub.at("oracle"));
    setup.commit_key = CommitKeyFrom(params);
    for (unsigned j = 0; j <= params.lambda; ++j) {
      setup.tags.push_back(ProjectTag(j));
      setup.tilde_tags.push_back(RandomnessTag(j));
    }
    const std::set<std::string> dummy_tags{
        setup.tags[params.lambda - 1], setup.tags[params.lambda],
        setup.tilde_tags[params.lambda - 1], setup.tilde_tags[params.lambda]};
    for (const auto& [tag, value] : setup.oracle.programmed()) {
      if (!dummy_tags.count(tag)) problem("oracle programmed outside the dummy tags: " + tag);
    }
    CacheTagBases(setup);
    const bool range_recheck = pub.at("options").value("range_recheck_on_transfer", false);

    AdminSecret admin;
    admin.betas = DecodeInts(secret.at("betas"));
    admin.s0 = PsaKey{params.exp(DecodeInt(secret.at("s0")))};
    admin.s0_tilde = PsaKey{params.exp(DecodeInt(secret.at("s0_tilde")))};
    for (unsigned j = 0; j + 1 < params.lambda && j < admin.betas.size(); ++j) {
      if (abs(admin.betas[j]) > params.q_prime) problem("beta out of range");
    }
    if (admin.betas.size() != params.lambda + 1 ||
        admin.betas[params.lambda] != -1 - admin.betas[params.lambda - 1]) {
      problem("beta_lambda != -1 - beta_{lambda-1}");
    }
    if (!VerificationProductsHold(setup, admin.betas)) {
      problem("verification products are not 1");
    }

    std::map<std::string, std::size_t> keygen_messages;
    for (const Json* record : phase("keygen")) {
      const Json& payload = record->at("payload");
      const std::string family = payload.at("family").get<std::string>();
      ++keygen_messages[family];
      if (payload.contains("column_sum")) {
        auto& sums = family == "s" ? admin.column_sums : admin.column_sums_tilde;
        sums.push_back(params.exp(DecodeInt(payload.at("column_sum"))));
      }
    }
    const std::size_t n_squared = static_cast<std::size_t>(params.n) * params.n;
    if (keygen_messages["s"] != n_squared || keygen_messages["s_tilde"] != n_squared) {
      problem("keygen message count differs from n^2");
    }
    auto complement = [&](const std::vector<Exponent>& sums) {
      mpz_class total = 0;
      for (const auto& s : sums) total += s.value();
      return params.exp(-total);
    };
    if (complement(admin.column_sums) != admin.s0.s ||
        complement(admin.column_sums_tilde) != admin.s0_tilde.s) {
      problem("administrator key is not the complement of the column sums");
    }

    Blackboard board = BoardFromJson(phase("board")[0]->at("payload").at("board"));
    Blackboard board_tilde = BoardFromJson(phase("board")[1]->at("payload").at("board"));
    if (board.tag != setup.tags[0] || board_tilde.tag != setup.tilde_tags[0] ||
        board.ids.size() != params.n || board_tilde.ids != board.ids) {
      problem("blackboards do not cover the investors");
      return report;
    }
    Administrator replay(setup, admin, board, board_tilde);
    if (!replay.CheckBoards()) problem("blackboard verification failed");

    std::map<InvestorId, int> batches_per_investor;
    std::vector<PayBatch> pays;
    for (const Json* record : phase("pay")) {
      pays.push_back(PayBatchFromJson(params, record->at("payload")));
      ++batches_per_investor[pays.back().investor];
    }
    replay.ReceivePayments(pays);
    for (const Json* record : phase("transfer")) {
      TransferRequest request = TransferFromJson(params, record->at("payload"));
      if (request.range_recheck != range_recheck) problem("transfer ignores the recheck option");
      replay.ApplyTransfer(request);
    }
    replay.PublishAlphas(DecodeInts(phase("alphas")[0]->at("payload").at("alphas")));
    std::vector<ReturnBatch> returns;
    for (const Json* record : phase("return")) {
      returns.push_back(ReturnBatchFromJson(record->at("payload")));
      ++batches_per_investor[returns.back().investor];
    }
    replay.ReceiveReturns(returns);
    for (const auto& [id, count] : batches_per_investor) {
      if (count > 2) problem("investor " + std::to_string(id) + " sent more than two batches");
    }

    const RoundVerdict& verdict = replay.verdict();
    report.replay_matches = ToJson(verdict) == phase("verdict")[0]->at("payload");
    if (!report.replay_matches) problem("recomputed verdict differs from the recorded verdict");
    if (!verdict.clean()) problem("round has detection events or aborted");
    if (!ConservationHolds(verdict)) problem("conservation identities fail");
    for (const auto& inv : verdict.investors) {
      if (batches_per_investor[inv.id] != 2) {
        problem("investor " + std::to_string(inv.id) + " did not send exactly two batches");
      }
    }
    report.checks_pass = report.problems.empty();
    if (!report.replay_matches) report.checks_pass = false;
  } catch (const ProtocolError& e) {
    problem(e.what());
  } catch (const Json::exception& e) {
    problem(std::string("malformed record: ") + e.what());
  } catch (const std::exception& e) {
    problem(e.what());
  }
  return report;
}

}  // namespace investcoin
