#include <doctest.h>

#include <cmath>

#include "aippms/graph_env.hpp"
#include "oracles.hpp"

using namespace aippms;

namespace {

LocationGraph line(std::vector<Energy> weights) {
  std::vector<Point> pos;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i <= weights.size(); ++i) pos.push_back({double(i), 0.0});
  for (std::size_t i = 0; i < weights.size(); ++i)
    edges.push_back({NodeId(i), NodeId(i + 1), weights[i]});
  return LocationGraph(pos, edges, 0, NodeId(weights.size()));
}

// Connected random graph: random spanning tree plus chords.
std::pair<std::size_t, std::vector<Edge>> random_graph(Rng& rng, std::size_t n, std::size_t chords) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.push_back({NodeId(rng.index(v)), v, rng.uniform(0.1, 5.0)});
  for (std::size_t i = 0; i < chords; ++i) {
    const auto u = NodeId(rng.index(n)), v = NodeId(rng.index(n));
    if (u != v) edges.push_back({u, v, rng.uniform(0.1, 5.0)});
  }
  return {n, edges};
}

}  // namespace

TEST_CASE("shortest costs: direct triangle edges") {
  const std::vector<Edge> edges{{0, 1, 1}, {1, 2, 1}, {0, 2, 1}};
  const auto c = all_pairs_shortest_costs(3, edges);
  for (NodeId u = 0; u < 3; ++u)
    for (NodeId v = 0; v < 3; ++v) CHECK(c(u, v) == (u == v ? 0.0 : 1.0));
}

TEST_CASE("shortest costs: path sums and next-hop expansion") {
  const auto g = line({1, 2});
  CHECK(g.costs()(0, 2) == 3.0);
  CHECK(g.costs().path(0, 2) == std::vector<NodeId>{0, 1, 2});
  CHECK(g.costs().path(2, 2) == std::vector<NodeId>{2});
}

TEST_CASE("shortest costs agree with per-source Dijkstra") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto [n, edges] = random_graph(rng, 10, 8);
    const auto c = all_pairs_shortest_costs(n, edges);
    const auto ref = oracle::dijkstra_all_pairs(n, edges);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = 0; v < n; ++v) CHECK(c(u, v) == doctest::Approx(ref[u * n + v]).epsilon(1e-12));
  }
}

TEST_CASE("disconnected graph is rejected") {
  const std::vector<Edge> edges{{0, 1, 1}};
  CHECK_THROWS_AS(all_pairs_shortest_costs(3, edges), GraphError);
  CHECK_THROWS_AS(LocationGraph({{0, 0}, {1, 0}}, {{0, 0, 1}}, 0, 1), GraphError);
  CHECK_THROWS_AS(LocationGraph({{0, 0}, {1, 0}}, {{0, 1, -1}}, 0, 1), GraphError);
}

TEST_CASE("action cost") {
  const auto g = line({1.5, 2});
  const std::vector<SensorSpec> sensors{{"cheap", 0.5, 0.8, 0.85}, {"expensive", 2.0, 1.0, 0.95}};
  auto s = AgentState::initial(g, 10);
  CHECK(action_cost(s, Action::sense(1), g, sensors) == 2.0);
  CHECK(action_cost(s, Action::move(1), g, sensors) == 1.5);
  CHECK_THROWS_AS(action_cost(s, Action::move(0), g, sensors), InvalidAction);
  CHECK_THROWS_AS(action_cost(s, Action::move(2), g, sensors), InvalidAction);
  CHECK_THROWS_AS(action_cost(s, Action::sense(2), g, sensors), InvalidAction);
}

TEST_CASE("feasible actions at an exact budget follow shortest paths") {
  // Two shortest routes 0->4 (via 1 and via 2) and a longer one via 3.
  LocationGraph g({{0, 0}, {1, 1}, {1, -1}, {1, 2}, {2, 0}},
                  {{0, 1, 1}, {1, 4, 1}, {0, 2, 0.5}, {2, 4, 1.5}, {0, 3, 1}, {3, 4, 3}}, 0, 4);
  const std::vector<SensorSpec> sensors{{"s", 0.1, 1, 1}};
  AgentState s = AgentState::initial(g, g.costs()(0, 4));
  const auto actions = feasible_actions(s, g, sensors, g.costs());
  CHECK(actions == std::vector<Action>{Action::move(1), Action::move(2)});
  for (const auto& a : actions)
    CHECK(*g.edge_weight(0, a.node()) + g.costs()(a.node(), 4) == doctest::Approx(g.costs()(0, 4)));
}

TEST_CASE("feasible actions with a dominating budget include everything") {
  const auto g = line({1, 1, 1});
  const std::vector<SensorSpec> sensors{{"a", 0.1, 1, 1}, {"b", 0.2, 1, 1}};
  AgentState s = AgentState::initial(g, 100);
  s.current = 1;
  CHECK(feasible_actions(s, g, sensors, g.costs()) ==
        std::vector<Action>{Action::move(0), Action::move(2), Action::sense(0), Action::sense(1)});
  CHECK(feasible_actions(s, g, sensors, g.costs(), false) == std::vector<Action>{Action::move(0), Action::move(2)});
}

TEST_CASE("terminal at goal below the cheapest action") {
  const auto g = line({1});
  const std::vector<SensorSpec> sensors{{"a", 0.5, 1, 1}};
  AgentState s = AgentState::initial(g, 0.4);
  s.current = 1;
  CHECK(feasible_actions(s, g, sensors, g.costs()).empty());
  s.remaining_budget = 0.5;
  CHECK(feasible_actions(s, g, sensors, g.costs()) == std::vector<Action>{Action::sense(0)});
}

TEST_CASE("feasibility predicate") {
  const auto g = line({1, 2});
  AgentState s = AgentState::initial(g, 0);
  s.current = 2;
  CHECK(is_feasible_state(s, g.costs(), 2));
  s.current = 0;
  s.remaining_budget = 3.0 - 1e-6;
  CHECK_FALSE(is_feasible_state(s, g.costs(), 2));
  s.remaining_budget = 3.0;
  CHECK(is_feasible_state(s, g.costs(), 2));
}

TEST_CASE("tour estimate on small metrics") {
  LocationGraph tri({{0, 0}, {1, 0}, {0.5, 0.8}}, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}, 0, 0);
  CHECK(tsp_cost_estimate(tri, 0, tri.costs()) == doctest::Approx(3.0));

  std::vector<Point> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<Edge> all;
  for (NodeId u = 0; u < 4; ++u)
    for (NodeId v = u + 1; v < 4; ++v) all.push_back({u, v, euclidean(sq[u], sq[v])});
  LocationGraph square(sq, all, 0, 0);
  CHECK(oracle::brute_force_tour(square.costs(), 0) == doctest::Approx(4.0));
  CHECK(tsp_cost_estimate(square, 0, square.costs()) == doctest::Approx(4.0));
}

TEST_CASE("tour estimate never beats the exhaustive optimum") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.index(6);
    std::vector<Point> pos;
    for (std::size_t i = 0; i < n; ++i) pos.push_back({rng.uniform(), rng.uniform()});
    std::vector<Edge> edges;
    for (NodeId v = 1; v < n; ++v) edges.push_back({NodeId(rng.index(v)), v, euclidean(pos[0], pos[v]) + 0.1});
    LocationGraph g(pos, edges, 0, 0);
    const double opt = oracle::brute_force_tour(g.costs(), 0);
    CHECK(tsp_cost_estimate(g, 0, g.costs()) >= opt - 1e-9);
  }
}

TEST_CASE("sensor fidelity decays geometrically") {
  const SensorSpec s{"x", 1, 0.8, 0.5};
  CHECK(s.fidelity(0) == doctest::Approx(0.8));
  CHECK(s.fidelity(1) == doctest::Approx(0.4));
  CHECK(SensorSpec{"y", 1, 1.0, 0.95}.fidelity(4) == doctest::Approx(std::pow(0.95, 4)));
}

TEST_CASE("node set") {
  NodeSet s(130);
  s.insert(0);
  s.insert(129);
  CHECK(s.size() == 2);
  CHECK(s.contains(129));
  CHECK_FALSE(s.contains(64));
  CHECK(s.to_vector() == std::vector<NodeId>{0, 129});
  CHECK_THROWS(s.insert(130));
  NodeSet t = s;
  t.insert(64);
  CHECK(s.is_subset_of(t));
  CHECK_FALSE(t.is_subset_of(s));
}
