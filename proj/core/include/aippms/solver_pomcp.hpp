#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aippms/pomdp.hpp"

namespace aippms {

enum class RolloutPolicy { Gcb, Random };

std::string to_string(RolloutPolicy policy);

struct PlannerConfig {
  std::size_t n_simulations = 1000;
  double ucb_c = 10.0;
  double gamma = 0.95;
  double epsilon = 0.01;
  RolloutPolicy rollout = RolloutPolicy::Gcb;
  std::size_t ig_samples = 10;

  // GCB softmax. Utilities are divided by their largest magnitude when
  // normalize_utilities is set, then by the temperature.
  double softmax_temperature = 0.1;
  bool normalize_utilities = true;
  // Restrict the softmax to positive-benefit actions whenever one exists.
  bool positive_support = true;

  void validate() const;
};

/// POMCP history tree. Node 0 is the planning root; children of an action are
/// keyed by the observation that followed it.
class SearchTree {
 public:
  struct Branch {
    std::uint64_t hash = 0;
    std::string key;
    std::size_t node = 0;
  };

  struct ActionStats {
    Action action;
    std::uint64_t visits = 0;
    double value = 0.0;
    double return_sum = 0.0;  // shadow accumulator for the incremental mean
    std::vector<Branch> branches;
  };

  struct HistoryNode {
    std::uint64_t visits = 0;
    std::vector<ActionStats> actions;
  };

  static constexpr std::size_t kRoot = 0;

  /// Creates a node whose children are exactly `feasible`, each with
  /// N_init = V_init = 0.
  std::size_t add_node(std::span<const Action> feasible);

  HistoryNode& node(std::size_t i) { return nodes_.at(i); }
  const HistoryNode& node(std::size_t i) const { return nodes_.at(i); }
  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

  std::optional<std::size_t> find_child(std::size_t node, std::size_t action_index, const Observation& obs) const;
  void link_child(std::size_t node, std::size_t action_index, const Observation& obs, std::size_t child);

 private:
  std::vector<HistoryNode> nodes_;
};

/// Index into node.actions maximising V + c sqrt(ln N(h) / N(ha)). Unvisited
/// actions score +infinity; ties go to the lowest action id.
std::size_t ucb_select(const SearchTree::HistoryNode& node, double c);

/// GCB softmax distribution over feasible actions: moves score expected
/// marginal utility per unit cost, senses score information gain per unit
/// cost. Returns the actions (action-id order) and their probabilities.
struct ActionDistribution {
  std::vector<Action> actions;
  std::vector<double> utilities;
  std::vector<double> probabilities;
};
ActionDistribution gcb_action_distribution(const Problem& problem, const AgentState& state, const WorldBelief& belief,
                                           const PlannerConfig& config, Rng& rng);

Action gcb_rollout_action(const Problem& problem, const AgentState& state, const WorldBelief& belief,
                          const PlannerConfig& config, Rng& rng);

/// Uniform over feasible actions.
Action random_rollout_action(const Problem& problem, const AgentState& state, Rng& rng);

/// Probabilities of a softmax over utilities, with the normalisation and
/// support options of the config.
std::vector<double> softmax_probabilities(std::span<const double> utilities, const PlannerConfig& config);

/// Constrained POMCP. Every simulated action is drawn from the pruned
/// feasible set, so no simulation can violate the energy budget.
class PomcpPlanner {
 public:
  using StepHook = std::function<void(const AgentState&, const Action&)>;

  PomcpPlanner(const Problem& problem, PlannerConfig config, Rng& rng);

  /// Runs config.n_simulations root-sampled simulations and returns the root
  /// action with the highest value estimate. Throws InvalidAction when the
  /// state is terminal.
  Action plan(const AgentState& state, const WorldBelief& belief);

  /// One simulation from tree node `node`. `belief` is the belief at that
  /// node and is advanced along the simulated history.
  double simulate(std::size_t node, const AgentState& state, const WorldState& world, WorldBelief& belief,
                  int depth);

  /// Rollout-policy playout from depth to the discount horizon or terminal.
  double rollout(AgentState state, const WorldState& world, WorldBelief& belief, int depth);

  const SearchTree& tree() const { return tree_; }
  const PlannerConfig& config() const { return config_; }

  /// Called for every simulated (tree or rollout) action before it is applied.
  void set_step_hook(StepHook hook) { hook_ = std::move(hook); }

  /// First depth d with gamma^d < epsilon.
  int horizon() const { return horizon_; }

 private:
  Action rollout_action(const AgentState& state, const WorldBelief& belief);
  bool tracks_belief() const { return config_.rollout == RolloutPolicy::Gcb; }

  const Problem& problem_;
  PlannerConfig config_;
  Rng& rng_;
  SearchTree tree_;
  StepHook hook_;
  int horizon_ = 0;
};

/// Convenience wrapper: fresh planner and tree for one decision.
Action plan(const Problem& problem, const AgentState& state, const WorldBelief& belief, const PlannerConfig& config,
            Rng& rng);

}  // namespace aippms
