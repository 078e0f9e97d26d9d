#include <algorithm>

#include "doctest.h"

#include "investcoin/errors.hpp"
#include "investcoin/keygen.hpp"
#include "support.hpp"

using namespace investcoin;
using investcoin::testing::CachedParams;
using investcoin::testing::Toy;

namespace {

bool KeysSumToZero(const GroupParams& params, const KeygenResult& keygen) {
  mpz_class total = keygen.admin_key.s.value();
  for (const auto& key : keygen.investor_keys) total += key.s.value();
  return params.exp(total).value() == 0;
}

bool AllTrue(const std::vector<bool>& v) {
  return std::all_of(v.begin(), v.end(), [](bool b) { return b; });
}

}  // namespace

TEST_SUITE("keygen") {

TEST_CASE("keys sum to zero for n = 1 and n = 3 at p = 23") {
  const GroupParams& params = Toy();
  OracleTable oracle;
  for (unsigned n : {1u, 3u}) {
    Drbg rng("keygen", "toy");
    const KeygenResult keygen = RunKeygen(params, oracle, "t/0", n, rng);
    CHECK(keygen.investor_keys.size() == n);
    CHECK(keygen.message_count == n * n);
    CHECK(KeysSumToZero(params, keygen));
    CHECK(AllTrue(VerifyBlackboard(params, oracle, keygen.board, keygen.column_sums)));
  }
}

TEST_CASE("five investors exchange 25 messages") {
  const GroupParams& params = CachedParams(64);
  OracleTable oracle;
  Drbg rng("keygen", "five");
  const KeygenResult keygen = RunKeygen(params, oracle, "t/0", 5, rng);
  CHECK(keygen.message_count == 25);
  CHECK(KeysSumToZero(params, keygen));
  CHECK_THROWS_AS(RunKeygen(params, oracle, "t/0", 0, rng), std::invalid_argument);
}

TEST_CASE("a tampered board entry fails its column") {
  const GroupParams& params = CachedParams(64);
  OracleTable oracle;
  Drbg rng("keygen", "tamper");
  KeygenResult keygen = RunKeygen(params, oracle, "t/0", 4, rng);
  keygen.board.entries[1][2] = Mul(params, keygen.board.entries[1][2], params.h1);
  const std::vector<bool> verdicts = VerifyBlackboard(params, oracle, keygen.board, keygen.column_sums);
  CHECK(verdicts == std::vector<bool>{true, true, false, true});
}

TEST_CASE("a misreported column sum fails that column only") {
  const GroupParams& params = CachedParams(64);
  OracleTable oracle;
  Drbg rng("keygen", "column");
  KeygenResult keygen = RunKeygen(params, oracle, "t/0", 4, rng);
  keygen.column_sums[3] = params.exp(keygen.column_sums[3].value() + 1);
  const std::vector<bool> verdicts = VerifyBlackboard(params, oracle, keygen.board, keygen.column_sums);
  CHECK(verdicts == std::vector<bool>{true, true, true, false});
  keygen.column_sums.pop_back();
  CHECK(VerifyBlackboard(params, oracle, keygen.board, keygen.column_sums) ==
        std::vector<bool>(4, false));
}

TEST_CASE("the pinned zero cipher is the row product") {
  const GroupParams& params = CachedParams(64);
  OracleTable oracle;
  Drbg rng("keygen", "pinned");
  const KeygenResult keygen = RunKeygen(params, oracle, "t/0", 4, rng);
  for (InvestorId id = 1; id <= 4; ++id) {
    const PsaCiphertext pinned = PinnedZeroCipher(params, keygen.board, id);
    CHECK(pinned == PsaEnc(params, oracle, keygen.investor_keys[id - 1], "t/0", 0));
  }
  CHECK_THROWS_AS(PinnedZeroCipher(params, keygen.board, 9), std::out_of_range);
}

TEST_CASE("join, leave and fail keep the key set consistent") {
  const GroupParams& params = CachedParams(64);
  OracleTable oracle;
  KeyNetwork net(params, oracle, "t/0", 3, Drbg("keygen", "network"));
  CHECK(net.keygen_messages() == 9);
  CHECK(net.ZeroSum());

  const KeyUpdateReport join = net.Join();
  CHECK(join.joined == std::vector<InvestorId>{4});
  CHECK(join.message_count == 10);
  CHECK(net.size() == 4);
  CHECK(net.ZeroSum());
  CHECK(AllTrue(VerifyBlackboard(params, oracle, net.board(), net.column_sums())));

  const KeyUpdateReport leave = net.Leave(2);
  CHECK(leave.removed == std::vector<InvestorId>{2});
  CHECK(leave.message_count == 3);
  CHECK(net.ids() == std::vector<InvestorId>{1, 3, 4});
  CHECK(net.ZeroSum());
  CHECK(AllTrue(VerifyBlackboard(params, oracle, net.board(), net.column_sums())));

  const KeyUpdateReport fail = net.Fail({1, 4});
  CHECK(fail.message_count == 1);
  CHECK(net.ids() == std::vector<InvestorId>{3});
  CHECK(net.ZeroSum());
  CHECK(AllTrue(VerifyBlackboard(params, oracle, net.board(), net.column_sums())));

  CHECK_THROWS_AS(net.Leave(2), std::out_of_range);
  try {
    net.Fail({3});
    FAIL("expected EmptyNetwork");
  } catch (const ProtocolError& e) {
    CHECK(e.code() == ErrorCode::kEmptyNetwork);
  }
}

TEST_CASE("update cost stays within 4n messages") {
  const GroupParams& params = CachedParams(64);
  OracleTable oracle;
  KeyNetwork net(params, oracle, "t/0", 2, Drbg("keygen", "cost"));
  Drbg choice("keygen", "cost/choice");
  for (int step = 0; step < 40; ++step) {
    KeyUpdateReport report;
    if (net.size() <= 2 || choice.UniformBelow(3) == 0) {
      report = net.Join();
    } else {
      const InvestorId id = net.ids()[choice.UniformBelow(net.size()).get_ui()];
      report = choice.UniformBelow(2) == 0 ? net.Leave(id) : net.Fail({id});
    }
    CHECK(report.message_count <= KeyNetwork::kMessagesPerInvestorBound * net.size());
    CHECK(net.ZeroSum());
  }
  CHECK(KeyNetwork::kMessagesPerInvestorBound == 4);
}

}  // TEST_SUITE
