#include "investcoin/serialize.hpp"

#include <stdexcept>

namespace investcoin {
namespace {

Json EncodeElement(const GroupElement& g) { return EncodeInt(g.value); }
GroupElement DecodeElement(const Json& json) { return GroupElement{DecodeInt(json)}; }

Json EncodeClaim(const Claim& claim) {
  return Json{{"value", EncodeInt(claim.value)}, {"opening", EncodeInt(claim.opening)}};
}

Claim DecodeClaim(const Json& json) {
  return Claim{DecodeInt(json.at("value")), DecodeInt(json.at("opening"))};
}

}  // namespace

Json EncodeInt(const mpz_class& value) { return value.get_str(); }

Json EncodeInts(const std::vector<mpz_class>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(EncodeInt(v));
  return out;
}

std::vector<mpz_class> DecodeInts(const Json& json) {
  std::vector<mpz_class> out;
  for (const auto& v : json) out.push_back(DecodeInt(v));
  return out;
}

mpz_class DecodeInt(const Json& value) {
  if (value.is_number_integer()) {
    return mpz_class(value.dump());
  }
  if (!value.is_string()) {
    throw std::invalid_argument("expected a decimal integer, got " + value.dump());
  }
  mpz_class out;
  const std::string& text = value.get_ref<const std::string&>();
  if (text.empty() || out.set_str(text, 10) != 0) {
    throw std::invalid_argument("malformed decimal integer '" + text + "'");
  }
  return out;
}

Json ToJson(const GroupParams& params) {
  return Json{{"q", EncodeInt(params.q)},
              {"p", EncodeInt(params.p)},
              {"m", EncodeInt(params.m)},
              {"l", params.l},
              {"n", params.n},
              {"lambda", params.lambda},
              {"q_prime", EncodeInt(params.q_prime)},
              {"h1", EncodeElement(params.h1)},
              {"h2", EncodeElement(params.h2)},
              {"seed", ToHex(params.seed)}};
}

GroupParams ParamsFromJson(const Json& json) {
  GroupParams params = MakeParams(DecodeInt(json.at("q")), json.at("l").get<unsigned>(),
                                  json.at("n").get<unsigned>(), json.at("lambda").get<unsigned>(),
                                  DecodeInt(json.at("q_prime")), DecodeElement(json.at("h1")),
                                  DecodeElement(json.at("h2")),
                                  FromHex(json.at("seed").get<std::string>()));
  if (params.p != DecodeInt(json.at("p")) || params.m != DecodeInt(json.at("m"))) {
    throw ProtocolError(ErrorCode::kParameterConflict, "derived p or m disagree with the record");
  }
  return params;
}

Json ToJson(const OracleTable& oracle) {
  Json out = Json::object();
  for (const auto& [tag, value] : oracle.programmed()) {
    out[tag] = EncodeElement(value);
  }
  return out;
}

OracleTable OracleFromJson(const Json& json) {
  OracleTable oracle;
  for (const auto& [tag, value] : json.items()) {
    oracle.Program(tag, DecodeElement(value));
  }
  return oracle;
}

Json ToJson(const PsaCiphertext& cipher) {
  return Json{{"c", EncodeElement(cipher.c)}, {"tag", cipher.tag}};
}

PsaCiphertext CipherFromJson(const Json& json) {
  return PsaCiphertext{DecodeElement(json.at("c")), json.at("tag").get<std::string>()};
}

Json ToJson(const OrProof& proof) {
  return Json::array({EncodeElement(proof.a1), EncodeElement(proof.a2), EncodeInt(proof.v1.value()),
                      EncodeInt(proof.v2.value()), EncodeInt(proof.w1.value()),
                      EncodeInt(proof.w2.value())});
}

OrProof OrProofFromJson(const GroupParams& params, const Json& json) {
  if (!json.is_array() || json.size() != 6) {
    throw std::invalid_argument("an OR proof has six fields");
  }
  OrProof proof;
  proof.a1 = DecodeElement(json[0]);
  proof.a2 = DecodeElement(json[1]);
  proof.v1 = params.exp(DecodeInt(json[2]));
  proof.v2 = params.exp(DecodeInt(json[3]));
  proof.w1 = params.exp(DecodeInt(json[4]));
  proof.w2 = params.exp(DecodeInt(json[5]));
  proof.v = params.exp(proof.v1.value() + proof.v2.value());
  return proof;
}

Json ToJson(const RangeProof& proof) {
  Json bits = Json::array();
  for (std::size_t k = 0; k < proof.bit_coms.size() && k < proof.bit_proofs.size(); ++k) {
    bits.push_back(Json{{"com", EncodeElement(proof.bit_coms[k].com)},
                        {"proof", ToJson(proof.bit_proofs[k])}});
  }
  return Json{{"l", proof.bit_coms.size()}, {"bits", bits}};
}

RangeProof RangeProofFromJson(const GroupParams& params, const Json& json) {
  RangeProof proof;
  const auto& bits = json.at("bits");
  if (bits.size() != json.at("l").get<std::size_t>()) {
    throw std::invalid_argument("range proof length field disagrees with its bit list");
  }
  for (const auto& bit : bits) {
    proof.bit_coms.push_back(Commitment{DecodeElement(bit.at("com"))});
    proof.bit_proofs.push_back(OrProofFromJson(params, bit.at("proof")));
  }
  return proof;
}

Json ToJson(const Blackboard& board) {
  Json entries = Json::array();
  for (const auto& row : board.entries) {
    Json out = Json::array();
    for (const auto& e : row) out.push_back(EncodeElement(e));
    entries.push_back(out);
  }
  return Json{{"tag", board.tag}, {"ids", board.ids}, {"entries", entries}};
}

Blackboard BoardFromJson(const Json& json) {
  Blackboard board;
  board.tag = json.at("tag").get<std::string>();
  board.ids = json.at("ids").get<std::vector<InvestorId>>();
  for (const auto& row : json.at("entries")) {
    std::vector<GroupElement> out;
    for (const auto& e : row) out.push_back(DecodeElement(e));
    board.entries.push_back(std::move(out));
  }
  return board;
}

Json ToJson(const PayBatch& batch) {
  Json ciphers = Json::array();
  for (const auto& c : batch.ciphers) ciphers.push_back(ToJson(c));
  Json coms = Json::array();
  for (const auto& c : batch.bundle.coms) coms.push_back(EncodeElement(c.com));
  Json tilde = Json::array();
  for (const auto& c : batch.bundle.tilde) tilde.push_back(ToJson(c));
  Json proofs = Json::array();
  for (const auto& p : batch.proofs) proofs.push_back(ToJson(p));
  return Json{{"investor", batch.investor}, {"ciphers", ciphers}, {"coms", coms},
              {"tilde", tilde},             {"proofs", proofs},   {"claim", EncodeClaim(batch.claim)}};
}

PayBatch PayBatchFromJson(const GroupParams& params, const Json& json) {
  PayBatch batch;
  batch.investor = json.at("investor").get<InvestorId>();
  for (const auto& c : json.at("ciphers")) batch.ciphers.push_back(CipherFromJson(c));
  for (const auto& c : json.at("coms")) batch.bundle.coms.push_back(Commitment{DecodeElement(c)});
  for (const auto& c : json.at("tilde")) batch.bundle.tilde.push_back(CipherFromJson(c));
  for (const auto& p : json.at("proofs")) batch.proofs.push_back(RangeProofFromJson(params, p));
  batch.claim = DecodeClaim(json.at("claim"));
  return batch;
}

Json ToJson(const ReturnBatch& batch) {
  return Json{{"investor", batch.investor}, {"claim", EncodeClaim(batch.claim)}};
}

ReturnBatch ReturnBatchFromJson(const Json& json) {
  return ReturnBatch{json.at("investor").get<InvestorId>(), DecodeClaim(json.at("claim"))};
}

Json ToJson(const TransferRequest& request) {
  Json out{{"sequence", request.sequence},
           {"from", request.from},
           {"to", request.to},
           {"project", request.project},
           {"from_com", EncodeElement(request.from_com.com)},
           {"to_com", EncodeElement(request.to_com.com)},
           {"range_recheck", request.range_recheck}};
  if (request.from_proof) out["from_proof"] = ToJson(*request.from_proof);
  if (request.to_proof) out["to_proof"] = ToJson(*request.to_proof);
  return out;
}

TransferRequest TransferFromJson(const GroupParams& params, const Json& json) {
  TransferRequest request;
  request.sequence = json.at("sequence").get<std::size_t>();
  request.from = json.at("from").get<InvestorId>();
  request.to = json.at("to").get<InvestorId>();
  request.project = json.at("project").get<unsigned>();
  request.from_com = Commitment{DecodeElement(json.at("from_com"))};
  request.to_com = Commitment{DecodeElement(json.at("to_com"))};
  request.range_recheck = json.at("range_recheck").get<bool>();
  if (json.contains("from_proof")) {
    request.from_proof = RangeProofFromJson(params, json.at("from_proof"));
  }
  if (json.contains("to_proof")) {
    request.to_proof = RangeProofFromJson(params, json.at("to_proof"));
  }
  return request;
}

Json ToJson(const RoundVerdict& verdict) {
  Json investors = Json::array();
  for (const auto& inv : verdict.investors) {
    Json entry{{"id", inv.id},
               {"submitted", inv.submitted},
               {"range_ok", inv.range_ok},
               {"pinned_ok", inv.pinned_ok},
               {"consistency", inv.consistency},
               {"paid", inv.paid},
               {"payment", EncodeInt(inv.payment)},
               {"payout", EncodeInt(inv.payout)}};
    entry["returned"] = inv.returned ? Json(*inv.returned) : Json(nullptr);
    investors.push_back(entry);
  }
  Json detections = Json::array();
  for (const auto& d : verdict.detections) {
    detections.push_back(Json{{"phase", d.phase},
                              {"investor", d.investor},
                              {"project", d.project},
                              {"reason", d.reason},
                              {"detail", d.detail}});
  }
  Json ledger = Json::object();
  for (const auto& [account, delta] : verdict.ledger) {
    ledger[account] = EncodeInt(delta);
  }
  return Json{{"accepted", verdict.accepted},
              {"abort", verdict.abort ? Json(std::string(ErrorCodeName(*verdict.abort)))
                                      : Json(nullptr)},
              {"aggregates", EncodeInts(verdict.aggregates)},
              {"alphas", EncodeInts(verdict.alphas)},
              {"investors", investors},
              {"detections", detections},
              {"ledger", ledger}};
}

}  // namespace investcoin
