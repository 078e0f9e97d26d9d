#include <map>
#include <memory>

#include <benchmark/benchmark.h>

#include "investcoin/kernels.hpp"

using namespace investcoin;

namespace {

struct World {
  Deployment deployment;
  std::vector<InvestorState> investors;
  std::vector<PayBatch> batches;
  std::vector<GroupElement> pinned;
};

// One world per investor count, built on first use.
const World& GetWorld(unsigned n) {
  static std::map<unsigned, std::unique_ptr<World>> worlds;
  auto& slot = worlds[n];
  if (slot) return *slot;
  slot = std::make_unique<World>();
  World& w = *slot;
  const GroupParams params = GenerateParams(64, 16, n, 6, "bench");
  Drbg rng("bench", "world");
  Drbg setup_rng = rng.Fork("setup");
  w.deployment = DieSet(params, setup_rng);
  Drbg amounts = rng.Fork("amounts");
  for (const auto& key : w.deployment.investor_keys) {
    std::vector<mpz_class> row(params.lambda, 0);
    for (unsigned j = 1; j + 2 <= params.lambda; ++j) row[j - 1] = amounts.UniformIn(0, params.m);
    Drbg inv_rng = rng.Fork("investor", key.id);
    w.investors.push_back(MakeInvestor(w.deployment.setup, key, row, inv_rng));
  }
  std::vector<Drbg> rngs;
  for (const auto& inv : w.investors) rngs.push_back(rng.Fork("proofs", inv.key.id));
  w.batches = BuildPayBatches(w.deployment.setup, w.investors, rngs, Schedule::kSerial);
  for (const auto& b : w.batches) {
    w.pinned.push_back(PinnedZeroCipher(params, w.deployment.keygen.board, b.investor).c);
  }
  return w;
}

Schedule ScheduleOf(const benchmark::State& state) {
  return state.range(1) == 0 ? Schedule::kSerial : Schedule::kParallel;
}

void BM_BuildPayBatches(benchmark::State& state) {
  const World& w = GetWorld(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) {
    std::vector<Drbg> rngs;
    for (const auto& inv : w.investors) rngs.push_back(Drbg("bench", "proofs").Fork("i", inv.key.id));
    benchmark::DoNotOptimize(
        BuildPayBatches(w.deployment.setup, w.investors, rngs, ScheduleOf(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_VerifyPayments(benchmark::State& state) {
  const World& w = GetWorld(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(VerifyPayments(w.deployment.setup, w.deployment.admin, w.batches,
                                            w.pinned, ScheduleOf(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DieDec(benchmark::State& state) {
  const World& w = GetWorld(static_cast<unsigned>(state.range(0)));
  const auto columns = CipherColumns(w.deployment.setup, w.batches);
  for (auto _ : state) {
    benchmark::DoNotOptimize(DieDec(w.deployment.setup, w.deployment.admin, columns,
                                    w.batches.size(), ScheduleOf(state)));
  }
}

void Shapes(benchmark::internal::Benchmark* b) {
  b->ArgNames({"n", "parallel"});
  for (int n : {4, 16}) {
    for (int parallel : {0, 1}) b->Args({n, parallel});
  }
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_BuildPayBatches)->Apply(Shapes);
BENCHMARK(BM_VerifyPayments)->Apply(Shapes);
BENCHMARK(BM_DieDec)->Apply(Shapes);

BENCHMARK_MAIN();
