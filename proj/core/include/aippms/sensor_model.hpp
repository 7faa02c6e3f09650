#pragma once

#include <optional>
#include <span>
#include <vector>

#include "aippms/belief.hpp"
#include "aippms/graph_env.hpp"
#include "aippms/rng.hpp"

namespace aippms {

/// A node a sensor can read from a given agent location, and the probability
/// that the reading is correct there.
struct FootprintEntry {
  NodeId node = 0;
  double accuracy = 1.0;
};

/// Symmetric-channel observation model shared by both benchmark domains.
/// A reading equals the true state with probability `accuracy` and is
/// otherwise uniform over the remaining states of the alphabet.
///
/// The per-(sensor, agent node) footprints are tabulated once, so sampling
/// and likelihood evaluation never recompute A * r^d.
class SensorModel {
 public:
  SensorModel() = default;

  /// footprints[s][a] lists the nodes sensor s can read from node a.
  /// sensing_nodes empty means sensing is allowed everywhere.
  /// visit_state[v], when set, replaces the revealed state in the belief after
  /// node v is visited (ISRS rocks become bad once sampled).
  SensorModel(std::size_t node_count, std::size_t state_count,
              std::vector<std::vector<std::vector<FootprintEntry>>> footprints,
              std::vector<bool> sensing_nodes = {},
              std::vector<std::optional<StateId>> visit_state = {});

  std::size_t node_count() const { return nodes_; }
  std::size_t state_count() const { return states_; }
  std::size_t sensor_count() const { return footprints_.size(); }

  bool can_sense_at(NodeId node) const { return sensing_nodes_.empty() || sensing_nodes_.at(node); }

  std::span<const FootprintEntry> footprint(SensorId sensor, NodeId agent) const {
    return footprints_.at(sensor).at(agent);
  }

  /// Probability of a correct reading of target from agent; 0 if the target
  /// is outside the footprint.
  double accuracy(SensorId sensor, NodeId agent, NodeId target) const {
    return accuracy_[(sensor * nodes_ + agent) * nodes_ + target];
  }

  /// P(observed | truth) for a reading taken with the given accuracy.
  double channel(double accuracy, StateId observed, StateId truth) const {
    if (states_ <= 1) return 1.0;
    return observed == truth ? accuracy : (1.0 - accuracy) / static_cast<double>(states_ - 1);
  }

  /// Draws one reading of a node whose true state is `truth`.
  StateId sample_reading(double accuracy, StateId truth, Rng& rng) const;

  /// One reading per unvisited footprint node. Throws InvalidAction when
  /// sensing is not allowed at the agent's node.
  Observation observe(const WorldState& world, NodeId agent, SensorId sensor, const NodeSet& visited,
                      Rng& rng) const;

  /// Bayes update of belief with a sensing observation taken at agent.
  void update(WorldBelief& belief, NodeId agent, const Observation& obs) const;

  /// Empty when sensing is allowed everywhere.
  const std::vector<bool>& sensing_nodes() const { return sensing_nodes_; }
  /// Empty when no node overrides its revealed state.
  const std::vector<std::optional<StateId>>& visit_states() const { return visit_state_; }

  StateId state_after_visit(NodeId node, StateId revealed) const {
    if (visit_state_.empty() || !visit_state_.at(node)) return revealed;
    return *visit_state_[node];
  }

 private:
  std::size_t nodes_ = 0;
  std::size_t states_ = 0;
  std::vector<std::vector<std::vector<FootprintEntry>>> footprints_;
  std::vector<double> accuracy_;
  std::vector<bool> sensing_nodes_;
  std::vector<std::optional<StateId>> visit_state_;
};

/// Footprint table for fidelity A * r^d with d the Euclidean distance between
/// node positions. Targets beyond a sensor's range are excluded; targets
/// restricts the readable nodes (empty = every node).
std::vector<std::vector<std::vector<FootprintEntry>>> distance_footprints(
    const LocationGraph& graph, std::span<const SensorSpec> sensors, std::span<const NodeId> targets = {});

}  // namespace aippms
