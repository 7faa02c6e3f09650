#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "aippms/belief.hpp"
#include "aippms/graph_env.hpp"
#include "aippms/rng.hpp"
#include "aippms/sensor_model.hpp"
#include "aippms/utility.hpp"

namespace aippms {

enum class Domain { Sar, Isrs, Custom };

std::string to_string(Domain domain);

/// One benchmark instance: graph, sensors, utility, observation model, prior
/// and budget. Immutable and cheap to copy (the utility is shared).
class Problem {
 public:
  Problem(LocationGraph graph, std::vector<SensorSpec> sensors, std::shared_ptr<const UtilityFunction> utility,
          SensorModel sensor_model, WorldBelief prior, Energy budget, Domain domain);

  const LocationGraph& graph() const { return graph_; }
  const CostMatrix& costs() const { return graph_.costs(); }
  std::span<const SensorSpec> sensors() const { return sensors_; }
  const UtilityFunction& utility() const { return *utility_; }
  std::shared_ptr<const UtilityFunction> shared_utility() const { return utility_; }
  const SensorModel& sensor_model() const { return sensor_model_; }
  const WorldBelief& prior() const { return prior_; }
  Energy budget() const { return budget_; }
  Domain domain() const { return domain_; }
  NodeId goal() const { return graph_.goal(); }

  AgentState initial_state() const { return AgentState::initial(graph_, budget_); }

  /// Feasible actions with the domain's sensing-location restriction applied.
  std::vector<Action> feasible_actions(const AgentState& state) const;

  /// Whether this specific action keeps the successor state feasible.
  bool is_feasible_action(const AgentState& state, const Action& action) const;

 private:
  LocationGraph graph_;
  std::vector<SensorSpec> sensors_;
  std::shared_ptr<const UtilityFunction> utility_;
  SensorModel sensor_model_;
  WorldBelief prior_;
  Energy budget_;
  Domain domain_;
};

struct StepOutcome {
  AgentState next_state;
  Observation observation;
  double reward = 0.0;
  Energy cost = 0.0;
};

/// Generative model. Moves are deterministic and reveal the destination's
/// true state with reward Delta(v' | visited)(world); senses only spend
/// energy, earn nothing, and draw a noisy observation from the sensor model.
/// Throws InvalidAction for an action outside the feasible set.
StepOutcome step(const Problem& problem, const AgentState& state, const WorldState& world, const Action& action,
                 Rng& rng);

/// No feasible action remains.
bool is_terminal(const Problem& problem, const AgentState& state);

/// Belief update after executing an action from `before`: collapse on the
/// visited node for moves, Bayes update for senses.
void apply_observation(const Problem& problem, WorldBelief& belief, const AgentState& before,
                       const Observation& obs);

struct EpisodeReturn {
  double total_reward = 0.0;
  Energy total_cost = 0.0;
  bool reached_goal = false;
};

/// Undiscounted totals of a trajectory of consecutive steps from the start.
EpisodeReturn episode_return(const Problem& problem, std::span<const StepOutcome> trajectory);

}  // namespace aippms
