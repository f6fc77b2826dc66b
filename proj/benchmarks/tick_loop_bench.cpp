#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "eot/compensated_sum.hpp"
#include "eot/price_path.hpp"
#include "eot/simulator.hpp"
#include "eot/trade.hpp"

namespace {

eot::PricePath gbm(std::size_t assets, std::size_t steps) {
  eot::GbmSpec g;
  g.mu.assign(assets, 0.0);
  g.sigma.assign(assets, 0.02);
  g.initial_prices.assign(assets, 1.0);
  g.steps = steps;
  g.seed = 1;
  return eot::generate(g);
}

eot::RebalancePolicy policy_for(int64_t index) {
  switch (index) {
    case 0: return eot::RebalancePolicy::full();
    case 1: return eot::RebalancePolicy::fractional(0.25);
    case 2: return eot::RebalancePolicy::threshold(0.05);
    default: return eot::RebalancePolicy::buy_and_hold();
  }
}

void BM_Run(benchmark::State& state) {
  const auto assets = static_cast<std::size_t>(state.range(0));
  const auto path = gbm(assets, 10000);
  eot::SimulationConfig config{
      eot::AssetWeights(std::vector<double>(assets, 1.0 / static_cast<double>(assets)))};
  config.policy = policy_for(state.range(1));
  for (auto _ : state) {
    auto report = eot::run(path, config);
    benchmark::DoNotOptimize(report.summary.delta_S);
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Run)
    ->ArgsProduct({{2, 8, 64}, {0, 1, 2, 3}})
    ->Unit(benchmark::kMillisecond);

void BM_PlanAndApply(benchmark::State& state) {
  const auto assets = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::lognormal_distribution<double> shock(0.0, 0.05);
  const eot::AssetWeights weights(
      std::vector<double>(assets, 1.0 / static_cast<double>(assets)));
  auto base = eot::new_portfolio(
      weights, eot::PriceVector(std::vector<double>(assets, 1.0)), 1.0);
  std::vector<double> p(assets);
  for (auto& x : p) x = shock(rng);
  const auto shocked = base.with_prices(eot::PriceVector(p));
  for (auto _ : state) {
    const auto batch = eot::plan_rebalance(shocked, eot::RebalancePolicy::full());
    auto result = eot::apply_batch(shocked, batch);
    benchmark::DoNotOptimize(result.state);
  }
}
BENCHMARK(BM_PlanAndApply)->Range(2, 1024);

void BM_CompensatedSum(benchmark::State& state) {
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& x : v) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(eot::compensated_sum(v));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CompensatedSum)->Range(8, 1 << 16);

}  // namespace

BENCHMARK_MAIN();
