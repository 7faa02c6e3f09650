#include <benchmark/benchmark.h>

#include "aippms/baseline_naive.hpp"
#include "aippms/domains.hpp"
#include "aippms/solver_pomcp.hpp"

namespace {

using namespace aippms;

Instance sar_instance(std::size_t nodes) {
  sar::Config cfg;
  cfg.n_nodes = nodes;
  Rng rng(2022);
  return sar::generate(cfg, rng);
}

Instance isrs_instance(std::size_t rocks, std::size_t beacons) {
  isrs::Config cfg;
  cfg.rocks = rocks;
  cfg.beacons = beacons;
  Rng rng(2022);
  return isrs::generate(cfg, rng);
}

void BM_AllPairsShortestCosts(benchmark::State& state) {
  const auto inst = sar_instance(static_cast<std::size_t>(state.range(0)));
  const auto& g = inst.problem.graph();
  for (auto _ : state) benchmark::DoNotOptimize(all_pairs_shortest_costs(g.node_count(), g.edges()));
}
BENCHMARK(BM_AllPairsShortestCosts)->Arg(30)->Arg(60)->Arg(120);

void BM_BayesUpdate(benchmark::State& state) {
  const auto inst = sar_instance(30);
  const auto& p = inst.problem;
  Rng rng(1);
  const AgentState s = p.initial_state();
  const auto obs = p.sensor_model().observe(inst.world, s.current, 0, s.visited, rng);
  for (auto _ : state) {
    WorldBelief b = p.prior();
    p.sensor_model().update(b, s.current, obs);
    benchmark::DoNotOptimize(b);
  }
  state.counters["readings"] = static_cast<double>(obs.readings.size());
}
BENCHMARK(BM_BayesUpdate);

void BM_CoverageMarginalGains(benchmark::State& state) {
  const auto inst = sar_instance(30);
  const auto& p = inst.problem;
  NodeSet visited(30);
  for (NodeId v = 0; v < 30; v += 3) visited.insert(v);
  std::vector<NodeState> queries;
  for (NodeId v = 0; v < 30; ++v)
    for (StateId x = 0; x < sar::kStateCount; ++x) queries.push_back({v, x});
  std::vector<double> out(queries.size());
  for (auto _ : state) {
    p.utility().marginal_gains(queries, visited, inst.world, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_CoverageMarginalGains);

void BM_OrienteeringPath(benchmark::State& state) {
  const auto inst = isrs_instance(25, 25);
  const auto& p = inst.problem;
  for (auto _ : state) benchmark::DoNotOptimize(plan_orienteering_path(p, p.initial_state(), p.prior(), 1000));
}
BENCHMARK(BM_OrienteeringPath);

void BM_PlanDecision(benchmark::State& state) {
  const bool sar_domain = state.range(0) == 0;
  const auto inst = sar_domain ? sar_instance(30) : isrs_instance(10, 10);
  const auto& p = inst.problem;
  PlannerConfig cfg;
  cfg.n_simulations = static_cast<std::size_t>(state.range(1));
  cfg.ucb_c = sar_domain ? 50.0 : 10.0;
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(plan(p, p.initial_state(), p.prior(), cfg, rng));
  state.SetLabel(sar_domain ? "sar" : "isrs");
}
BENCHMARK(BM_PlanDecision)->Args({0, 300})->Args({1, 300})->Args({1, 1000})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
