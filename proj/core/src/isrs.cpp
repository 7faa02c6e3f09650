#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "aippms/domains.hpp"

namespace aippms::isrs {

int manhattan(const Cell& a, const Cell& b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

std::string to_string(Movement movement) { return movement == Movement::Grid ? "grid" : "closure"; }

Movement movement_from_string(const std::string& name) {
  if (name == "grid") return Movement::Grid;
  if (name == "closure") return Movement::Closure;
  throw ConfigError("isrs: unknown movement '" + name + "'");
}

std::vector<SensorSpec> default_sensors() {
  return {
      SensorSpec{"cheap", 0.5, 0.8, 0.85},
      SensorSpec{"expensive", 2.0, 1.0, 0.95},
  };
}

void Config::validate() const {
  if (grid < 1) throw ConfigError("isrs: grid must be at least 1");
  const auto cells = static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid);
  if (rocks + beacons + 1 > cells) throw ConfigError("isrs: rocks + beacons + 1 exceeds the number of cells");
  if (!(p_good >= 0.0 && p_good <= 1.0)) throw ConfigError("isrs: p_good must lie in [0, 1]");
  if (!(budget >= 0.0)) throw ConfigError("isrs: budget must be non-negative");
  if (!(move_cost > 0.0)) throw ConfigError("isrs: move_cost must be positive");
  if (!(rock_reward >= 0.0)) throw ConfigError("isrs: rock_reward must be non-negative");
  if (sensors.empty()) throw ConfigError("isrs: at least one sensor is required");
  for (const auto& s : sensors) s.validate();
  if (origin && (origin->x < 0 || origin->y < 0 || origin->x >= grid || origin->y >= grid))
    throw ConfigError("isrs: origin lies outside the grid");
}

Cell Layout::cell(NodeId v) const {
  if (v == 0) return origin;
  if (is_rock(v)) return rocks[v - 1];
  if (is_beacon(v)) return beacons[v - 1 - rocks.size()];
  if (v < node_count()) return empty[v - 1 - rocks.size() - beacons.size()];
  throw std::out_of_range("isrs layout: node " + std::to_string(v) + " does not exist");
}

double rock_utility(const NodeSet& visited, const WorldState& world, const Layout& layout, double per_rock_reward) {
  double total = 0.0;
  for (std::size_t i = 0; i < layout.rocks.size(); ++i) {
    const NodeId v = layout.rock_node(i);
    if (visited.contains(v) && world.at(v) == kGood) total += per_rock_reward;
  }
  return total;
}

Problem build_problem(const Layout& layout, const Config& config) {
  config.validate();
  const std::size_t n = layout.node_count();
  std::vector<Point> positions(n);
  for (NodeId v = 0; v < n; ++v) {
    const Cell c = layout.cell(v);
    positions[v] = {static_cast<double>(c.x), static_cast<double>(c.y)};
  }
  const bool grid = config.movement == Movement::Grid;
  if (grid && n != static_cast<std::size_t>(config.grid) * static_cast<std::size_t>(config.grid))
    throw ConfigError("isrs: grid movement needs a node for every cell");
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) {
      const int d = manhattan(layout.cell(u), layout.cell(v));
      if (d == 0) throw GraphError("isrs: nodes " + std::to_string(u) + " and " + std::to_string(v) + " share a cell");
      if (grid && d != 1) continue;
      edges.push_back({u, v, d * config.move_cost});
    }
  LocationGraph graph(std::move(positions), std::move(edges), 0, 0);

  std::vector<NodeId> rock_nodes;
  for (std::size_t i = 0; i < layout.rocks.size(); ++i) rock_nodes.push_back(layout.rock_node(i));
  auto footprints = distance_footprints(graph, config.sensors, rock_nodes);
  std::vector<bool> sensing(n, false);
  std::vector<std::optional<StateId>> after_visit(n);
  for (NodeId v = 0; v < n; ++v) {
    sensing[v] = layout.is_beacon(v);
    if (!sensing[v])
      for (auto& per_sensor : footprints) per_sensor[v].clear();
    if (layout.is_rock(v)) after_visit[v] = kBad;
  }
  SensorModel model(n, kStateCount, std::move(footprints), std::move(sensing), std::move(after_visit));

  std::vector<double> rewards(n * kStateCount, 0.0);
  for (NodeId v : rock_nodes) rewards[v * kStateCount + kGood] = config.rock_reward;
  auto utility = std::make_shared<ModularUtility>(n, kStateCount, std::move(rewards));

  std::vector<double> prior(n * kStateCount, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    if (layout.is_rock(v)) {
      prior[v * kStateCount + kBad] = 1.0 - config.p_good;
      prior[v * kStateCount + kGood] = config.p_good;
    } else {
      prior[v * kStateCount + kBad] = 1.0;
    }
  }
  return Problem(std::move(graph), config.sensors, std::move(utility), std::move(model),
                 WorldBelief(n, kStateCount, std::move(prior)), config.budget, Domain::Isrs);
}

Layout generate_layout(const Config& config, Rng& rng) {
  config.validate();
  Layout layout;
  layout.origin = config.origin.value_or(Cell{0, config.grid / 2});

  std::vector<Cell> free;
  for (int x = 0; x < config.grid; ++x)
    for (int y = 0; y < config.grid; ++y)
      if (!(Cell{x, y} == layout.origin)) free.push_back({x, y});
  // Partial Fisher-Yates: the first rocks + beacons cells become the entities.
  const std::size_t needed = config.rocks + config.beacons;
  if (needed > free.size()) throw ConfigError("isrs: not enough free cells for the requested entities");
  for (std::size_t i = 0; i < needed; ++i) {
    const std::size_t j = i + rng.index(free.size() - i);
    std::swap(free[i], free[j]);
  }
  layout.rocks.assign(free.begin(), free.begin() + static_cast<std::ptrdiff_t>(config.rocks));
  layout.beacons.assign(free.begin() + static_cast<std::ptrdiff_t>(config.rocks),
                        free.begin() + static_cast<std::ptrdiff_t>(needed));
  if (config.movement == Movement::Grid) {
    for (int y = 0; y < config.grid; ++y)
      for (int x = 0; x < config.grid; ++x) {
        const Cell c{x, y};
        const auto taken = [&](const std::vector<Cell>& cells) {
          return std::find(cells.begin(), cells.end(), c) != cells.end();
        };
        if (!(c == layout.origin) && !taken(layout.rocks) && !taken(layout.beacons)) layout.empty.push_back(c);
      }
  }
  return layout;
}

Instance generate(const Config& config, Rng& rng) {
  const Layout layout = generate_layout(config, rng);
  WorldState world(layout.node_count(), kBad);
  for (std::size_t i = 0; i < layout.rocks.size(); ++i)
    world[layout.rock_node(i)] = rng.bernoulli(config.p_good) ? kGood : kBad;
  return {build_problem(layout, config), std::move(world)};
}

Observation sensor_observe(const WorldState& world, const Layout& layout, NodeId agent_node, SensorId sensor_id,
                           const SensorSpec& sensor, const NodeSet& visited, Rng& rng) {
  if (!layout.is_beacon(agent_node))
    throw InvalidAction("isrs: sensing requires a beacon, node " + std::to_string(agent_node) + " is not one");
  const Cell a = layout.cell(agent_node);
  Observation obs{Action::sense(sensor_id), {}};
  for (std::size_t i = 0; i < layout.rocks.size(); ++i) {
    const NodeId v = layout.rock_node(i);
    if (visited.contains(v)) continue;
    const Cell r = layout.rocks[i];
    const double d = std::hypot(static_cast<double>(a.x - r.x), static_cast<double>(a.y - r.y));
    const StateId truth = world.at(v);
    const StateId reading = rng.bernoulli(sensor.fidelity(d)) ? truth : static_cast<StateId>(1 - truth);
    obs.readings.push_back({v, reading});
  }
  return obs;
}

}  // namespace aippms::isrs
