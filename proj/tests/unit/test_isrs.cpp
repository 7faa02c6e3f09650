#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "aippms/domains.hpp"

using namespace aippms;
using isrs::Cell;

TEST_CASE("all rocks good at p = 1") {
  Rng rng(1);
  isrs::Config cfg;
  cfg.p_good = 1.0;
  const auto inst = isrs::generate(cfg, rng);
  for (std::size_t i = 0; i < cfg.rocks; ++i) CHECK(inst.world[1 + i] == isrs::kGood);
  CHECK(inst.problem.prior().prob(1, isrs::kGood) == 1.0);
}

TEST_CASE("layout cells are distinct") {
  Rng rng(2);
  isrs::Config cfg;
  cfg.rocks = 25;
  cfg.beacons = 25;
  for (int trial = 0; trial < 20; ++trial) {
    const auto layout = isrs::generate_layout(cfg, rng);
    std::set<std::pair<int, int>> cells{{layout.origin.x, layout.origin.y}};
    for (const auto& c : layout.rocks) cells.insert({c.x, c.y});
    for (const auto& c : layout.beacons) cells.insert({c.x, c.y});
    CHECK(cells.size() == 51);
    CHECK(layout.origin == Cell{0, 5});
    for (const auto& [x, y] : cells) CHECK((x >= 0 && x < 10 && y >= 0 && y < 10));
  }
}

TEST_CASE("closure edges are Manhattan distances") {
  Rng rng(3);
  isrs::Config cfg;
  const auto layout = isrs::generate_layout(cfg, rng);
  const auto p = isrs::build_problem(layout, cfg);
  const auto& g = p.graph();
  CHECK(g.node_count() == 21);
  CHECK(g.start() == 0);
  CHECK(g.goal() == 0);
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (u == v) continue;
      const auto a = layout.cell(u), b = layout.cell(v);
      CHECK(*g.edge_weight(u, v) == std::abs(a.x - b.x) + std::abs(a.y - b.y));
    }
}

TEST_CASE("grid movement connects 4-neighbours only") {
  Rng rng(4);
  isrs::Config cfg;
  cfg.grid = 5;
  cfg.rocks = 3;
  cfg.beacons = 2;
  cfg.movement = isrs::Movement::Grid;
  const auto layout = isrs::generate_layout(cfg, rng);
  const auto p = isrs::build_problem(layout, cfg);
  const auto& g = p.graph();
  CHECK(g.node_count() == 25);
  CHECK(g.edges().size() == 40);
  for (const auto& e : g.edges()) CHECK(isrs::manhattan(layout.cell(e.u), layout.cell(e.v)) == 1);
  // Shortest costs are Manhattan distances.
  for (NodeId u = 0; u < 25; ++u)
    for (NodeId v = 0; v < 25; ++v) CHECK(g.costs()(u, v) == isrs::manhattan(layout.cell(u), layout.cell(v)));
}

TEST_CASE("rock utility") {
  const isrs::Layout layout{{0, 5}, {{1, 1}, {2, 2}, {3, 3}}, {{4, 4}}, {}};
  NodeSet visited(5);
  CHECK(isrs::rock_utility(visited, {0, 1, 1, 0, 0}, layout, 10) == 0.0);
  for (NodeId v : {1, 2, 3}) visited.insert(v);
  CHECK(isrs::rock_utility(visited, {0, 1, 1, 0, 0}, layout, 10) == 20.0);

  isrs::Config cfg;
  cfg.rocks = 3;
  cfg.beacons = 1;
  const auto p = isrs::build_problem(layout, cfg);
  CHECK(p.utility().value(visited, {0, 1, 1, 0, 0}) == 20.0);
  CHECK(p.utility().marginal_gain(1, visited, {0, 1, 1, 0, 0}) == 0.0);
}

TEST_CASE("sensing only at beacons") {
  const isrs::Layout layout{{0, 5}, {{1, 5}, {5, 5}}, {{0, 4}}, {}};
  isrs::Config cfg;
  cfg.rocks = 2;
  cfg.beacons = 1;
  const auto p = isrs::build_problem(layout, cfg);
  auto s = p.initial_state();
  for (const auto& a : p.feasible_actions(s)) CHECK(a.is_move());
  s.current = 3;
  s.visited.insert(3);
  const auto actions = p.feasible_actions(s);
  CHECK(std::count_if(actions.begin(), actions.end(), [](const Action& a) { return a.is_sense(); }) == 2);
  CHECK(action_cost(s, Action::sense(1), p.graph(), p.sensors()) == 2.0);
  CHECK(p.sensor_model().accuracy(1, 3, 2) == doctest::Approx(1.0 * std::pow(0.95, std::hypot(5, 1))));
  CHECK(p.sensor_model().accuracy(0, 3, 3) == 0.0);  // beacons carry no rock
}

TEST_CASE("sensor observation") {
  Rng rng(5);
  const isrs::Layout layout{{0, 5}, {{1, 5}, {5, 5}}, {{1, 4}}, {}};
  const WorldState world{0, 1, 0, 0};
  NodeSet visited(4);
  const SensorSpec perfect{"p", 1, 1.0, 1.0};
  for (int i = 0; i < 50; ++i) {
    const auto obs = isrs::sensor_observe(world, layout, 3, 0, perfect, visited, rng);
    CHECK(obs.readings == std::vector<Reading>{{1, 1}, {2, 0}});
  }
  // Beacon (1, 4) to rock (5, 5): distance sqrt(17); use a rock 4 cells away instead.
  const isrs::Layout straight{{0, 5}, {{5, 4}}, {{1, 4}}, {}};
  const SensorSpec decay{"d", 1, 1.0, 0.95};
  const int draws = 20000;
  int correct = 0;
  for (int i = 0; i < draws; ++i)
    correct += isrs::sensor_observe({0, 1, 0}, straight, 2, 0, decay, NodeSet(3), rng).readings.at(0).state == 1;
  const double p = std::pow(0.95, 4);
  CHECK(p == doctest::Approx(0.8145).epsilon(1e-4));
  CHECK(std::abs(correct - draws * p) <= 3 * std::sqrt(draws * p * (1 - p)));

  CHECK_THROWS_AS(isrs::sensor_observe(world, layout, 1, 0, perfect, visited, rng), InvalidAction);
}

TEST_CASE("config validation") {
  isrs::Config cfg;
  cfg.grid = 5;
  cfg.rocks = 20;
  cfg.beacons = 10;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK(isrs::movement_from_string("grid") == isrs::Movement::Grid);
  CHECK_THROWS_AS(isrs::movement_from_string("teleport"), ConfigError);
}
