#pragma once

#include <span>
#include <string>
#include <vector>

#include "aippms/rng.hpp"
#include "aippms/types.hpp"
#include "aippms/utility.hpp"

namespace aippms {

class SensorModel;
struct AgentState;

/// One (node, observed state) pair.
struct Reading {
  NodeId node = 0;
  StateId state = 0;
  friend bool operator==(const Reading&, const Reading&) = default;
};

/// The readings produced by one action. Moves yield exactly one deterministic
/// reading of the destination; senses yield zero or more noisy readings.
struct Observation {
  Action action;
  std::vector<Reading> readings;
  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Independence-factored categorical belief: one distribution per node over a
/// shared state alphabet. Value type.
class WorldBelief {
 public:
  WorldBelief() = default;
  /// probabilities is row-major [node][state]; every row must sum to 1.
  WorldBelief(std::size_t node_count, std::size_t state_count, std::vector<double> probabilities);

  /// Every node holds the same distribution.
  static WorldBelief identical(std::size_t node_count, std::span<const double> distribution);

  std::size_t node_count() const { return nodes_; }
  std::size_t state_count() const { return states_; }

  double prob(NodeId node, StateId state) const { return p_[node * states_ + state]; }
  std::span<const double> distribution(NodeId node) const {
    return {p_.data() + node * states_, states_};
  }
  std::span<double> mutable_distribution(NodeId node) { return {p_.data() + node * states_, states_}; }

  /// Most probable state; ties go to the lowest state id.
  StateId mode(NodeId node) const;
  double mode_probability(NodeId node) const;
  bool is_point_mass(NodeId node) const;
  void set_point_mass(NodeId node, StateId state);

  /// Throws std::invalid_argument when a row is negative or not normalised.
  void validate() const;

  friend bool operator==(const WorldBelief&, const WorldBelief&) = default;

 private:
  std::size_t nodes_ = 0;
  std::size_t states_ = 0;
  std::vector<double> p_;
};

/// posterior_i(x) proportional to likelihood(i, o_i, x) * prior_i(x) for every
/// reading; other nodes are untouched. likelihood(node, observed, truth) must
/// return P(observed | truth). Throws InconsistentObservation when a reading
/// has zero probability under the belief.
template <class Likelihood>
void bayes_update_in_place(WorldBelief& belief, const Observation& obs, Likelihood&& likelihood) {
  const std::size_t k = belief.state_count();
  for (const Reading& r : obs.readings) {
    if (r.node >= belief.node_count())
      throw std::out_of_range("bayes_update: reading on unknown node " + std::to_string(r.node));
    auto dist = belief.mutable_distribution(r.node);
    double total = 0.0;
    for (std::size_t x = 0; x < k; ++x) {
      dist[x] *= likelihood(r.node, r.state, static_cast<StateId>(x));
      total += dist[x];
    }
    if (!(total > 0.0)) {
      throw InconsistentObservation(
          r.node, "observation of node " + std::to_string(r.node) + " has zero probability under the belief");
    }
    for (auto& v : dist) v /= total;
  }
}

template <class Likelihood>
WorldBelief bayes_update(const WorldBelief& belief, const Observation& obs, Likelihood&& likelihood) {
  WorldBelief out = belief;
  bayes_update_in_place(out, obs, std::forward<Likelihood>(likelihood));
  return out;
}

/// Point mass on the revealed state of a visited node.
WorldBelief collapse_on_visit(const WorldBelief& belief, NodeId node, StateId true_state);

/// Independent draw per node.
WorldState sample_world(const WorldBelief& belief, Rng& rng);

/// World with every node at its belief mode.
WorldState mode_world(const WorldBelief& belief);

/// E_b[Delta(node | visited)] over the node's own marginal; other nodes the
/// utility depends on are held at their belief modes.
double expected_marginal_utility(const WorldBelief& belief, NodeId node, const NodeSet& visited,
                                 const UtilityFunction& utility);

/// Batched form of expected_marginal_utility sharing one utility evaluation.
std::vector<double> expected_marginal_utilities(const WorldBelief& belief, std::span<const NodeId> nodes,
                                                const NodeSet& visited, const UtilityFunction& utility);

/// Sampled expected gain in belief-mode probability from a sensing action,
/// summed over nodes and averaged over n_samples simulated observations.
/// Throws std::invalid_argument for n_samples == 0 or a non-sense action.
double info_gain_estimate(const WorldBelief& belief, const Action& sense_action, const AgentState& state,
                          const SensorModel& sensors, std::size_t n_samples, Rng& rng);

}  // namespace aippms
