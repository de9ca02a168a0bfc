#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "nakasim/chain.hpp"
#include "nakasim/engine.hpp"
#include "nakasim/rng.hpp"
#include "nakasim/vdf.hpp"
#include "nakasim/walk.hpp"

namespace {

using namespace nakasim;

// Rounds per second of the honest protocol.
void BM_EngineRounds(benchmark::State& state) {
  SimConfig cfg;
  cfg.n = static_cast<std::uint32_t>(state.range(0));
  cfg.b = 0;
  cfg.p = 1.0 / static_cast<double>(state.range(1));
  cfg.T = 500;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    cfg.seed = seed++;
    Simulation sim(cfg, RunOptions{false, false});
    benchmark::DoNotOptimize(sim.finish().summary.final_prefix_len);
  }
  state.SetItemsProcessed(state.iterations() * cfg.T);
}
BENCHMARK(BM_EngineRounds)->Args({4, 1})->Args({32, 1})->Args({100, 10})->Args({100, 1000});

void BM_EngineAdversarial(benchmark::State& state) {
  SimConfig cfg;
  cfg.n = 32;
  cfg.b = 8;
  cfg.p = 0.1;
  cfg.T = 500;
  cfg.adversary = static_cast<AdversaryTag>(state.range(0));
  cfg.vdf_mode = true;
  cfg.selective_relay = true;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    cfg.seed = seed++;
    Simulation sim(cfg, RunOptions{false, false});
    benchmark::DoNotOptimize(sim.finish().summary.adv_max_len);
  }
  state.SetItemsProcessed(state.iterations() * cfg.T);
}
BENCHMARK(BM_EngineAdversarial)->DenseRange(0, 4);

// A p = 1 block tree with n tips, built once per size.
struct Forest {
  BlockStore store;
  std::vector<BlockId> tips;
};

Forest p1_forest(std::uint32_t n, std::uint32_t T) {
  SimConfig cfg;
  cfg.n = n;
  cfg.b = 0;
  cfg.p = 1.0;
  cfg.T = T;
  Simulation sim(cfg, RunOptions{false, false});
  const ProcessTrace tr = sim.finish();
  return {sim.state().store, tr.final_tips};
}

void BM_CommonPrefix(benchmark::State& state) {
  const Forest f = p1_forest(static_cast<std::uint32_t>(state.range(0)), 1000);
  for (auto _ : state) benchmark::DoNotOptimize(common_prefix(f.store, f.tips));
}
BENCHMARK(BM_CommonPrefix)->Arg(8)->Arg(64);

void BM_CoalescenceTime(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  RandomStream rng(7, StreamTag::kWalk);
  for (auto _ : state) benchmark::DoNotOptimize(coalescence_time(n, 1.0, n, rng));
}
BENCHMARK(BM_CoalescenceTime)->Arg(4)->Arg(32)->Arg(256);

// Full walk against the cached validator on a long chain.
BlockStore long_chain(std::uint32_t len) {
  BlockStore store;
  BlockId tip = kGenesis;
  for (std::uint32_t k = 1; k <= len; ++k) tip = store.extend(tip, 0, k, true, k - 1);
  return store;
}

void BM_ValidateChain(benchmark::State& state) {
  const auto len = static_cast<std::uint32_t>(state.range(0));
  const BlockStore store = long_chain(len);
  const BlockId tip{len};
  for (auto _ : state) benchmark::DoNotOptimize(validate_chain(store, tip, len + 1));
}
BENCHMARK(BM_ValidateChain)->Arg(1000)->Arg(10000);

void BM_ValidatorCached(benchmark::State& state) {
  const auto len = static_cast<std::uint32_t>(state.range(0));
  const BlockStore store = long_chain(len);
  const BlockId tip{len};
  VdfValidator v(store);
  (void)v.check(tip, len + 1);
  for (auto _ : state) benchmark::DoNotOptimize(v.check(tip, len + 1));
}
BENCHMARK(BM_ValidatorCached)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
