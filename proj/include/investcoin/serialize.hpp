#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

#include "investcoin/keygen.hpp"
#include "investcoin/protocol.hpp"
#include "investcoin/round.hpp"

namespace investcoin {

using Json = nlohmann::json;

// Integers travel as decimal strings; plain JSON integers are accepted on input.
Json EncodeInt(const mpz_class& value);
mpz_class DecodeInt(const Json& value);
Json EncodeInts(const std::vector<mpz_class>& values);
std::vector<mpz_class> DecodeInts(const Json& json);

Json ToJson(const GroupParams& params);
GroupParams ParamsFromJson(const Json& json);  // validated through MakeParams

Json ToJson(const OracleTable& oracle);
OracleTable OracleFromJson(const Json& json);

Json ToJson(const PsaCiphertext& cipher);
PsaCiphertext CipherFromJson(const Json& json);

Json ToJson(const OrProof& proof);
OrProof OrProofFromJson(const GroupParams& params, const Json& json);

Json ToJson(const RangeProof& proof);
RangeProof RangeProofFromJson(const GroupParams& params, const Json& json);

Json ToJson(const Blackboard& board);
Blackboard BoardFromJson(const Json& json);

Json ToJson(const PayBatch& batch);
PayBatch PayBatchFromJson(const GroupParams& params, const Json& json);

Json ToJson(const ReturnBatch& batch);
ReturnBatch ReturnBatchFromJson(const Json& json);

Json ToJson(const TransferRequest& request);
TransferRequest TransferFromJson(const GroupParams& params, const Json& json);

Json ToJson(const RoundVerdict& verdict);

}  // namespace investcoin
