#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aippms/pomdp.hpp"

namespace aippms {

/// A generated benchmark instance together with its hidden true world.
struct Instance {
  Problem problem;
  WorldState world;
};

// ===========================================================================
// Search-and-rescue coverage domain
// ===========================================================================

namespace sar {

/// Accessibility states, in the order of the configured distribution.
enum State : StateId { kHigh = 0, kMedium = 1, kLow = 2 };
inline constexpr std::size_t kStateCount = 3;

/// Default two-sensor suite: a cheap wide-range noisy sensor and an expensive
/// short-range accurate one. Costs are in edge-weight units (unit square).
std::vector<SensorSpec> default_sensors();

struct Config {
  std::size_t n_nodes = 30;
  double rho_min = 0.25;  // edge threshold rho ~ U(rho_min, rho_max)
  double rho_max = 0.40;
  std::array<double, kStateCount> distribution{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  std::array<double, kStateCount> coverage_radii{0.25, 0.12, 0.05};
  std::size_t grid_resolution = 100;  // tiles per side of the unit square
  double budget_fraction = 2.0 / 3.0;
  std::vector<SensorSpec> sensors = default_sensors();
  std::size_t max_resamples = 1000;

  void validate() const;
};

/// Number of grid tiles (tile centres) within the state-dependent radius of
/// at least one visited node. Direct enumeration, no caching.
double coverage_utility(const NodeSet& visited, const WorldState& world, std::span<const Point> positions,
                        std::span<const double> radii, std::size_t grid_resolution);

/// Coverage utility with per-(node, state) tile bitmasks precomputed, so a
/// marginal gain is a popcount over the uncovered part of one mask.
class CoverageUtility : public UtilityFunction {
 public:
  CoverageUtility(std::span<const Point> positions, std::span<const double> radii, std::size_t grid_resolution);

  double value(const NodeSet& visited, const WorldState& world) const override;
  double marginal_gain(NodeId node, const NodeSet& visited, const WorldState& world) const override;
  void marginal_gains(std::span<const NodeState> queries, const NodeSet& visited, const WorldState& world,
                      std::span<double> out) const override;

  std::size_t tiles() const { return grid_ * grid_; }
  std::span<const double> radii() const { return radii_; }
  std::size_t grid_resolution() const { return grid_; }

 private:
  std::span<const std::uint64_t> mask(NodeId node, StateId state) const {
    return {masks_.data() + (node * states_ + state) * words_, words_};
  }
  std::vector<std::uint64_t> covered(const NodeSet& visited, const WorldState& world) const;

  std::size_t nodes_;
  std::size_t states_;
  std::size_t grid_;
  std::size_t words_;
  std::vector<double> radii_;
  std::vector<std::uint64_t> masks_;
};

/// Problem over an existing graph: coverage utility, distance-decay sensors
/// with range cutoffs, and the configured distribution as the prior of every
/// node.
Problem build_problem(LocationGraph graph, const Config& config, Energy budget);

/// Random geometric graph on the unit square (resampled until connected),
/// start = goal = a random node, budget = budget_fraction * TSP estimate.
Instance generate(const Config& config, Rng& rng);

/// One reading per unvisited node within the sensor range of the agent,
/// correct with probability A * r^d and otherwise uniform over the two wrong
/// states. Computed directly from geometry.
Observation sensor_observe(const WorldState& world, const Point& agent, SensorId sensor_id, const SensorSpec& sensor,
                           std::span<const Point> nodes, const NodeSet& visited, Rng& rng);

}  // namespace sar

// ===========================================================================
// Information Search RockSample domain
// ===========================================================================

namespace isrs {

/// Rock states. The origin and beacons hold kBad, which carries no utility.
enum State : StateId { kBad = 0, kGood = 1 };
inline constexpr std::size_t kStateCount = 2;

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

int manhattan(const Cell& a, const Cell& b);

/// Cheap noisy sensor (cost 0.5) and expensive accurate sensor (cost 2).
std::vector<SensorSpec> default_sensors();

/// Grid: every cell is a node and moves go to 4-adjacent cells.
/// Closure: only the origin, rocks and beacons are nodes, on a complete graph
/// with Manhattan-distance weights.
enum class Movement { Grid, Closure };

std::string to_string(Movement movement);
Movement movement_from_string(const std::string& name);

struct Config {
  int grid = 10;
  std::size_t rocks = 10;
  std::size_t beacons = 10;
  double p_good = 0.5;
  Energy budget = 100.0;
  Energy move_cost = 1.0;
  double rock_reward = 10.0;
  std::vector<SensorSpec> sensors = default_sensors();
  std::optional<Cell> origin;  // default (0, grid / 2)
  Movement movement = Movement::Closure;

  void validate() const;
};

/// Entity cells. Node ids: 0 = origin, 1..k = rocks, k+1..k+b = beacons,
/// then the remaining cells in row-major order (empty for closure movement).
struct Layout {
  Cell origin;
  std::vector<Cell> rocks;
  std::vector<Cell> beacons;
  std::vector<Cell> empty;

  std::size_t node_count() const { return 1 + rocks.size() + beacons.size() + empty.size(); }
  NodeId rock_node(std::size_t i) const { return static_cast<NodeId>(1 + i); }
  NodeId beacon_node(std::size_t j) const { return static_cast<NodeId>(1 + rocks.size() + j); }
  bool is_rock(NodeId v) const { return v >= 1 && v <= rocks.size(); }
  bool is_beacon(NodeId v) const { return v > rocks.size() && v <= rocks.size() + beacons.size(); }
  Cell cell(NodeId v) const;
};

/// per_rock_reward times the number of visited good rocks.
double rock_utility(const NodeSet& visited, const WorldState& world, const Layout& layout, double per_rock_reward);

/// Location graph per config.movement (edge weight = Manhattan distance times
/// move_cost), sensing only at beacons, rocks turning bad once sampled, and a
/// Bernoulli(p_good) prior on every rock. For grid movement, layout.empty
/// must hold every other cell.
Problem build_problem(const Layout& layout, const Config& config);

/// Distinct random cells for rocks and beacons (origin fixed by config).
/// Fills layout.empty for grid movement.
Layout generate_layout(const Config& config, Rng& rng);

/// generate_layout followed by independent Bernoulli(p_good) rock states.
Instance generate(const Config& config, Rng& rng);

/// One binary reading per unvisited rock, correct with probability A * r^d
/// where d is the Euclidean beacon-to-rock distance in cells. Throws
/// InvalidAction when agent_node is not a beacon.
Observation sensor_observe(const WorldState& world, const Layout& layout, NodeId agent_node, SensorId sensor_id,
                           const SensorSpec& sensor, const NodeSet& visited, Rng& rng);

}  // namespace isrs

}  // namespace aippms
