#include "fixtures.hpp"

#include <algorithm>

namespace aippms::fixture {

std::shared_ptr<const UtilityFunction> modular(std::vector<std::vector<double>> rewards) {
  const std::size_t n = rewards.size();
  const std::size_t k = rewards.front().size();
  std::vector<double> flat;
  for (const auto& row : rewards) flat.insert(flat.end(), row.begin(), row.end());
  return std::make_shared<ModularUtility>(n, k, std::move(flat));
}

Problem triangle() {
  LocationGraph graph({{0, 0}, {1, 0}, {0.75, 0.5}}, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.5}}, 0, 2);
  std::vector<SensorSpec> sensors{{"probe", 0.5, 0.8, 1.0, 10.0}};
  std::vector<std::vector<std::vector<FootprintEntry>>> fp{{{{1, 0.8}}, {}, {}}};
  SensorModel model(3, 2, std::move(fp));
  WorldBelief prior(3, 2, {1, 0, 0.5, 0.5, 1, 0});
  return Problem(std::move(graph), std::move(sensors), modular({{0, 0}, {10, 10}, {0, 0}}), std::move(model),
                 std::move(prior), 2.5, Domain::Custom);
}

Problem sense_flip() {
  LocationGraph graph({{0, 0}, {1, 1}, {1, -1}, {2, 0}},
                      {{0, 1, 1.0}, {0, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}}, 0, 3);
  std::vector<SensorSpec> sensors{{"scope", 0.25, 1.0, 1.0, 10.0}};
  std::vector<std::vector<std::vector<FootprintEntry>>> fp{{{{1, 1.0}, {2, 1.0}}, {}, {}, {}}};
  SensorModel model(4, 2, std::move(fp));
  WorldBelief prior(4, 2, {1, 0, 0.5, 0.5, 0.5, 0.5, 1, 0});
  return Problem(std::move(graph), std::move(sensors), modular({{0, 0}, {0, 10}, {0, 10}, {0, 0}}),
                 std::move(model), std::move(prior), 2.5, Domain::Custom);
}

Problem random_problem(const RandomSpec& spec, Rng& rng) {
  const std::size_t n = spec.nodes;
  std::vector<Point> pos;
  for (std::size_t i = 0; i < n; ++i) pos.push_back({rng.uniform(), rng.uniform()});
  std::vector<Edge> edges;
  auto add = [&](NodeId u, NodeId v) {
    for (const auto& e : edges)
      if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return;
    edges.push_back({u, v, euclidean(pos[u], pos[v]) + 0.05});
  };
  // Random spanning tree, then extra chords.
  for (NodeId v = 1; v < n; ++v) add(static_cast<NodeId>(rng.index(v)), v);
  for (std::size_t i = 0; i < spec.extra_edges; ++i) {
    const auto u = static_cast<NodeId>(rng.index(n));
    const auto v = static_cast<NodeId>(rng.index(n));
    if (u != v) add(u, v);
  }
  const auto start = static_cast<NodeId>(rng.index(n));
  NodeId goal = start;
  if (spec.distinct_goal && n > 1) goal = static_cast<NodeId>((start + 1 + rng.index(n - 1)) % n);
  LocationGraph graph(pos, edges, start, goal);

  std::vector<SensorSpec> sensors{{"wide", 0.05, 0.7, 0.5, 0.8}, {"narrow", 0.15, 0.95, 0.6, 0.4}};
  auto fp = distance_footprints(graph, sensors);
  SensorModel model(n, spec.states, std::move(fp));

  std::vector<double> prior;
  std::vector<std::vector<double>> rewards(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<double> w(spec.states);
    double total = 0.0;
    for (auto& x : w) total += (x = 0.1 + rng.uniform());
    for (auto& x : w) prior.push_back(x / total);
    for (std::size_t x = 0; x < spec.states; ++x) rewards[v].push_back(10.0 * rng.uniform());
  }
  const Energy tour = tsp_cost_estimate(graph, start, graph.costs());
  const Energy budget = std::max(spec.budget_factor * tour, graph.costs()(start, goal) + 0.01);
  return Problem(std::move(graph), std::move(sensors), modular(std::move(rewards)), std::move(model),
                 WorldBelief(n, spec.states, std::move(prior)), budget, Domain::Custom);
}

}  // namespace aippms::fixture
