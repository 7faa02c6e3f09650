#include <doctest.h>

#include <cmath>
#include <limits>

#include "aippms/baseline_naive.hpp"
#include "aippms/domains.hpp"
#include "fixtures.hpp"

using namespace aippms;

namespace {

// Start 0, goal 9, chain 0-1-2-9 of unit edges. Nodes 1..8 are uniform
// binary; only 1 and 2 pay (10 when good). Nodes 3..8 hang off the goal
// behind weight-100 edges. A perfect sensor (cost 0.1) at node 0 reads 1..8,
// so its information gain is exactly 8 * 0.5 = 4 and the path utility is 10.
Problem decision_instance(std::vector<SensorSpec> sensors, std::vector<std::vector<FootprintEntry>> at_start) {
  std::vector<Point> pos;
  for (int i = 0; i < 10; ++i) pos.push_back({double(i), 0});
  std::vector<Edge> edges{{0, 1, 1}, {1, 2, 1}, {2, 9, 1}};
  for (NodeId v = 3; v <= 8; ++v) edges.push_back({v, 9, 100});
  LocationGraph g(pos, edges, 0, 9);
  std::vector<std::vector<std::vector<FootprintEntry>>> fp;
  for (auto& entries : at_start) {
    std::vector<std::vector<FootprintEntry>> table(10);
    table[0] = std::move(entries);
    fp.push_back(std::move(table));
  }
  std::vector<double> prior{1, 0};
  for (int v = 1; v <= 8; ++v) prior.insert(prior.end(), {0.5, 0.5});
  prior.insert(prior.end(), {1, 0});
  std::vector<std::vector<double>> rewards(10, {0, 0});
  rewards[1] = rewards[2] = {0, 10};
  return Problem(std::move(g), std::move(sensors), fixture::modular(rewards), SensorModel(10, 2, std::move(fp)),
                 WorldBelief(10, 2, prior), 3.1, Domain::Custom);
}

Problem perfect_reader() {
  std::vector<FootprintEntry> all;
  for (NodeId v = 1; v <= 8; ++v) all.push_back({v, 1.0});
  return decision_instance({{"scope", 0.1, 1, 1}}, {all});
}

bool is_walk(const Problem& p, const PlannedPath& path) {
  Energy c = 0;
  for (std::size_t i = 1; i < path.nodes.size(); ++i) {
    const auto w = p.graph().edge_weight(path.nodes[i - 1], path.nodes[i]);
    if (!w) return false;
    c += *w;
  }
  return std::abs(c - path.cost) < 1e-9;
}

}  // namespace

TEST_CASE("config validation") {
  NaiveConfig c;
  CHECK_NOTHROW(c.validate());
  c.lambda = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("zero utility everywhere gives the shortest path") {
  LocationGraph g({{0, 0}, {1, 1}, {1, -1}, {2, 0}}, {{0, 1, 1}, {1, 3, 1}, {0, 2, 2}, {2, 3, 2}}, 0, 3);
  const Problem p(std::move(g), {}, fixture::modular({{0}, {0}, {0}, {0}}), SensorModel(4, 1, {}),
                  WorldBelief(4, 1, {1, 1, 1, 1}), 50, Domain::Custom);
  const auto path = plan_orienteering_path(p, p.initial_state(), p.prior(), 100);
  CHECK(path.nodes == std::vector<NodeId>{0, 1, 3});
  CHECK(path.cost == 2.0);
}

TEST_CASE("exact budget admits no insertion") {
  const auto p = fixture::sense_flip();
  auto s = p.initial_state();
  s.remaining_budget = 1.0;
  const auto path = plan_orienteering_path(p, s, p.prior(), 100);
  CHECK(path.nodes == std::vector<NodeId>{0, 3});
  CHECK(path.cost == 1.0);
  s.remaining_budget = 0.5;
  CHECK_THROWS_AS(plan_orienteering_path(p, s, p.prior(), 100), InvalidAction);
}

TEST_CASE("ample budget visits every node with positive expected gain") {
  Rng rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    fixture::RandomSpec spec;
    spec.nodes = 4 + rng.index(5);
    spec.budget_factor = 1.0;
    const auto p = fixture::random_problem(spec, rng);
    // Budget covers the closed tour plus a return leg to any goal.
    AgentState s = p.initial_state();
    s.remaining_budget = tsp_cost_estimate(p.graph(), s.current, p.costs()) + p.costs()(s.current, p.goal());
    const auto path = plan_orienteering_path(p, s, p.prior(), 1000);
    CHECK(is_walk(p, path));
    CHECK(path.nodes.front() == s.current);
    CHECK(path.nodes.back() == p.goal());
    CHECK(path.cost <= s.remaining_budget + 1e-9);
    NodeSet on_path(p.graph().node_count());
    for (auto v : path.nodes) on_path.insert(v);
    for (NodeId v = 0; v < p.graph().node_count(); ++v)
      if (expected_marginal_utility(p.prior(), v, s.visited, p.utility()) > 0) CHECK(on_path.contains(v));
  }
}

TEST_CASE("planned paths respect the budget") {
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    fixture::RandomSpec spec;
    spec.budget_factor = rng.uniform(0.2, 1.0);
    const auto p = fixture::random_problem(spec, rng);
    const auto s = p.initial_state();
    const auto path = plan_orienteering_path(p, s, p.prior(), 1000);
    CHECK(is_walk(p, path));
    CHECK(path.cost <= s.remaining_budget + kEnergyTolerance);
  }
}

TEST_CASE("path expected utility") {
  isrs::Config cfg;
  cfg.grid = 5;
  cfg.rocks = 2;
  cfg.beacons = 1;
  const isrs::Layout layout{{0, 2}, {{1, 2}, {2, 2}}, {{4, 4}}, {}};
  const auto p = isrs::build_problem(layout, cfg);
  const auto s = p.initial_state();
  CHECK(path_expected_utility({{0, 1, 2, 0}, 4}, p.prior(), s.visited, p.utility()) == doctest::Approx(10.0));
  CHECK(path_expected_utility({{0}, 0}, p.prior(), s.visited, p.utility()) == 0.0);
  NodeSet all(p.graph().node_count());
  for (NodeId v = 0; v < all.capacity(); ++v) all.insert(v);
  CHECK(path_expected_utility({{0, 1, 2, 0}, 4}, p.prior(), all, p.utility()) == 0.0);
}

TEST_CASE("best sensor by information gain") {
  Rng rng(4);
  {
    const auto p = perfect_reader();
    auto s = p.initial_state();
    const auto one = best_sensor_ig(p, s, p.prior(), 5, rng);
    CHECK(one.action == Action::sense(0));
    CHECK(one.value == doctest::Approx(4.0));
    s.remaining_budget = 3.0;  // the sense would strand the agent
    const auto none = best_sensor_ig(p, s, p.prior(), 5, rng);
    CHECK_FALSE(none.action);
    CHECK(none.value == -std::numeric_limits<double>::infinity());
  }
  {
    // Same footprint, one sensor strictly more accurate.
    std::vector<FootprintEntry> weak, strong;
    for (NodeId v = 1; v <= 8; ++v) {
      weak.push_back({v, 0.7});
      strong.push_back({v, 0.9});
    }
    const auto p = decision_instance({{"weak", 0.05, 0.7, 1}, {"strong", 0.05, 0.9, 1}}, {weak, strong});
    int strong_wins = 0;
    for (int rep = 0; rep < 30; ++rep) strong_wins += best_sensor_ig(p, p.initial_state(), p.prior(), 10, rng).action == Action::sense(1);
    CHECK(strong_wins >= 25);
  }
}

TEST_CASE("move-or-sense rule") {
  const auto p = perfect_reader();
  const auto s = p.initial_state();
  Rng rng(2);
  NaiveConfig c;
  c.lambda = 0.5;  // 0.5 * 10 > 0.5 * 4
  CHECK(naive_action(p, s, p.prior(), c, rng) == Action::move(1));
  c.lambda = 0.2;  // 0.2 * 10 < 0.8 * 4
  CHECK(naive_action(p, s, p.prior(), c, rng) == Action::sense(0));
  c.lambda = 0.0;
  CHECK(naive_action(p, s, p.prior(), c, rng) == Action::sense(0));
  c.lambda = 1.0;
  CHECK(naive_action(p, s, p.prior(), c, rng) == Action::move(1));
}

TEST_CASE("naive episodes end at the goal within budget") {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = fixture::random_problem({}, rng);
    const auto world = sample_world(p.prior(), rng);
    NaiveConfig c;
    c.lambda = rng.uniform();
    AgentState s = p.initial_state();
    WorldBelief b = p.prior();
    Energy spent = 0;
    while (!is_terminal(p, s)) {
      const auto out = step(p, s, world, naive_action(p, s, b, c, rng), rng);
      apply_observation(p, b, s, out.observation);
      spent += out.cost;
      s = out.next_state;
    }
    CHECK(s.current == p.goal());
    CHECK(spent <= p.budget() + kEnergyTolerance);
  }
}
