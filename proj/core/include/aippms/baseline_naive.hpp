#pragma once

#include <optional>
#include <vector>

#include "aippms/pomdp.hpp"

namespace aippms {

struct NaiveConfig {
  double lambda = 0.5;
  std::size_t ig_samples = 10;
  std::size_t max_insertions = 1000;

  void validate() const;
};

/// Concrete node sequence from the current node to the goal.
struct PlannedPath {
  std::vector<NodeId> nodes;
  Energy cost = 0.0;
};

/// Budget-feasible path from the current node to the goal built by greedy
/// cost-benefit insertion on the metric closure. Starts from the shortest current-to-goal
/// leg and repeatedly inserts the unvisited node with the best expected
/// marginal utility per unit of added cost, at its cheapest insertion point,
/// while the route fits the remaining budget.
/// Throws InvalidAction for an infeasible state.
PlannedPath plan_orienteering_path(const Problem& problem, const AgentState& state, const WorldBelief& belief,
                                   std::size_t max_insertions);

/// Sum of expected marginal utilities of the path's unvisited nodes, each
/// against the fixed current visited set.
double path_expected_utility(const PlannedPath& path, const WorldBelief& belief, const NodeSet& visited,
                             const UtilityFunction& utility);

struct SensorChoice {
  std::optional<Action> action;  // empty when no sense is feasible
  double value = 0.0;            // -infinity when no sense is feasible
};

/// Feasible sensing action with the largest estimated information gain.
SensorChoice best_sensor_ig(const Problem& problem, const AgentState& state, const WorldBelief& belief,
                            std::size_t ig_samples, Rng& rng);

/// Move to the next node of the planned path when
/// lambda * U(path) > (1 - lambda) * U*_S, otherwise use the best sensor.
/// Throws InvalidAction for a terminal state.
Action naive_action(const Problem& problem, const AgentState& state, const WorldBelief& belief,
                    const NaiveConfig& config, Rng& rng);

}  // namespace aippms
