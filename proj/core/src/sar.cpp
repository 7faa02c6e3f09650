#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "aippms/domains.hpp"

namespace aippms::sar {

std::vector<SensorSpec> default_sensors() {
  return {
      SensorSpec{"wide", 0.02, 0.65, 0.30, 0.5},
      SensorSpec{"focused", 0.10, 0.95, 0.60, 0.3},
  };
}

void Config::validate() const {
  if (n_nodes < 2) throw ConfigError("sar: n_nodes must be at least 2");
  if (!(rho_min > 0.0 && rho_min <= rho_max)) throw ConfigError("sar: need 0 < rho_min <= rho_max");
  double total = 0.0;
  for (double p : distribution) {
    if (!(p >= 0.0)) throw ConfigError("sar: distribution entries must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("sar: distribution must sum to 1");
  if (!(coverage_radii[2] > 0.0 && coverage_radii[0] > coverage_radii[1] && coverage_radii[1] > coverage_radii[2]))
    throw ConfigError("sar: coverage radii must be positive and ordered high > medium > low");
  if (grid_resolution == 0) throw ConfigError("sar: grid_resolution must be positive");
  if (!(budget_fraction > 0.0)) throw ConfigError("sar: budget_fraction must be positive");
  if (sensors.empty()) throw ConfigError("sar: at least one sensor is required");
  for (const auto& s : sensors) s.validate();
  if (max_resamples == 0) throw ConfigError("sar: max_resamples must be positive");
}

namespace {

Point tile_centre(std::size_t i, std::size_t j, std::size_t grid) {
  const double g = static_cast<double>(grid);
  return {(static_cast<double>(i) + 0.5) / g, (static_cast<double>(j) + 0.5) / g};
}

bool within(const Point& a, const Point& b, double r) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy <= r * r;
}

bool connected(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (const auto& e : edges) {
    const auto a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

double coverage_utility(const NodeSet& visited, const WorldState& world, std::span<const Point> positions,
                        std::span<const double> radii, std::size_t grid_resolution) {
  const auto nodes = visited.to_vector();
  double count = 0.0;
  for (std::size_t i = 0; i < grid_resolution; ++i) {
    for (std::size_t j = 0; j < grid_resolution; ++j) {
      const Point c = tile_centre(i, j, grid_resolution);
      for (NodeId v : nodes) {
        if (within(c, positions[v], radii[world.at(v)])) {
          count += 1.0;
          break;
        }
      }
    }
  }
  return count;
}

CoverageUtility::CoverageUtility(std::span<const Point> positions, std::span<const double> radii,
                                 std::size_t grid_resolution)
    : nodes_(positions.size()),
      states_(radii.size()),
      grid_(grid_resolution),
      words_((grid_resolution * grid_resolution + 63) / 64),
      radii_(radii.begin(), radii.end()),
      masks_(nodes_ * states_ * words_, 0) {
  if (grid_ == 0) throw std::invalid_argument("coverage grid must have at least one tile");
  for (std::size_t v = 0; v < nodes_; ++v) {
    for (std::size_t x = 0; x < states_; ++x) {
      std::uint64_t* m = masks_.data() + (v * states_ + x) * words_;
      for (std::size_t i = 0; i < grid_; ++i) {
        for (std::size_t j = 0; j < grid_; ++j) {
          if (!within(tile_centre(i, j, grid_), positions[v], radii_[x])) continue;
          const std::size_t t = i * grid_ + j;
          m[t >> 6] |= std::uint64_t{1} << (t & 63);
        }
      }
    }
  }
}

std::vector<std::uint64_t> CoverageUtility::covered(const NodeSet& visited, const WorldState& world) const {
  std::vector<std::uint64_t> out(words_, 0);
  for (NodeId v = 0; v < nodes_; ++v) {
    if (!visited.contains(v)) continue;
    const auto m = mask(v, world.at(v));
    for (std::size_t w = 0; w < words_; ++w) out[w] |= m[w];
  }
  return out;
}

double CoverageUtility::value(const NodeSet& visited, const WorldState& world) const {
  std::size_t count = 0;
  for (auto w : covered(visited, world)) count += static_cast<std::size_t>(std::popcount(w));
  return static_cast<double>(count);
}

double CoverageUtility::marginal_gain(NodeId node, const NodeSet& visited, const WorldState& world) const {
  const NodeState q[] = {{node, world.at(node)}};
  double out[1];
  marginal_gains(q, visited, world, out);
  return out[0];
}

void CoverageUtility::marginal_gains(std::span<const NodeState> queries, const NodeSet& visited,
                                     const WorldState& world, std::span<double> out) const {
  const auto cov = covered(visited, world);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (visited.contains(queries[q].node)) {
      out[q] = 0.0;
      continue;
    }
    const auto m = mask(queries[q].node, queries[q].state);
    std::size_t count = 0;
    for (std::size_t w = 0; w < words_; ++w) count += static_cast<std::size_t>(std::popcount(m[w] & ~cov[w]));
    out[q] = static_cast<double>(count);
  }
}

Problem build_problem(LocationGraph graph, const Config& config, Energy budget) {
  config.validate();
  const std::size_t n = graph.node_count();
  auto utility = std::make_shared<CoverageUtility>(graph.positions(), config.coverage_radii, config.grid_resolution);
  SensorModel model(n, kStateCount, distance_footprints(graph, config.sensors));
  auto prior = WorldBelief::identical(n, config.distribution);
  return Problem(std::move(graph), config.sensors, std::move(utility), std::move(model), std::move(prior), budget,
                 Domain::Sar);
}

Instance generate(const Config& config, Rng& rng) {
  config.validate();
  const std::size_t n = config.n_nodes;
  const double rho = rng.uniform(config.rho_min, config.rho_max);

  std::vector<Point> positions(n);
  std::vector<Edge> edges;
  bool ok = false;
  for (std::size_t attempt = 0; attempt < config.max_resamples && !ok; ++attempt) {
    for (auto& p : positions) {
      p.x = rng.uniform();
      p.y = rng.uniform();
    }
    edges.clear();
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v) {
        const double d = euclidean(positions[u], positions[v]);
        if (d < rho) edges.push_back({u, v, d});
      }
    ok = connected(n, edges);
  }
  if (!ok)
    throw GraphError("sar: no connected graph after " + std::to_string(config.max_resamples) + " resamples");

  const auto start = static_cast<NodeId>(rng.index(n));
  WorldState world(n);
  for (auto& x : world) x = static_cast<StateId>(rng.categorical(config.distribution));

  LocationGraph graph(std::move(positions), std::move(edges), start, start);
  const Energy budget = config.budget_fraction * tsp_cost_estimate(graph, start, graph.costs());
  return {build_problem(std::move(graph), config, budget), std::move(world)};
}

Observation sensor_observe(const WorldState& world, const Point& agent, SensorId sensor_id, const SensorSpec& sensor,
                           std::span<const Point> nodes, const NodeSet& visited, Rng& rng) {
  Observation obs{Action::sense(sensor_id), {}};
  for (NodeId v = 0; v < nodes.size(); ++v) {
    if (visited.contains(v)) continue;
    const double d = euclidean(agent, nodes[v]);
    if (d > sensor.range) continue;
    const double p = sensor.fidelity(d);
    const StateId truth = world.at(v);
    // Inverse-CDF draw: [0, p) correct, then (1 - p) / 2 for each wrong state.
    const double u = rng.uniform();
    StateId reading = truth;
    if (u >= p) {
      const bool first = u < p + (1.0 - p) / 2.0;
      const StateId wrong[2] = {static_cast<StateId>((truth + 1) % kStateCount),
                                static_cast<StateId>((truth + 2) % kStateCount)};
      reading = std::min(wrong[0], wrong[1]);
      if (!first) reading = std::max(wrong[0], wrong[1]);
    }
    obs.readings.push_back({v, reading});
  }
  return obs;
}

}  // namespace aippms::sar
