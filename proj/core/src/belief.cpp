#include "aippms/belief.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aippms/graph_env.hpp"
#include "aippms/sensor_model.hpp"

namespace aippms {

// ---------------------------------------------------------------------------
// WorldBelief

WorldBelief::WorldBelief(std::size_t node_count, std::size_t state_count, std::vector<double> probabilities)
    : nodes_(node_count), states_(state_count), p_(std::move(probabilities)) {
  if (state_count == 0) throw std::invalid_argument("belief needs at least one state");
  if (p_.size() != nodes_ * states_) throw std::invalid_argument("belief table has the wrong size");
  validate();
}

WorldBelief WorldBelief::identical(std::size_t node_count, std::span<const double> distribution) {
  std::vector<double> p;
  p.reserve(node_count * distribution.size());
  for (std::size_t i = 0; i < node_count; ++i) p.insert(p.end(), distribution.begin(), distribution.end());
  return WorldBelief(node_count, distribution.size(), std::move(p));
}

void WorldBelief::validate() const {
  for (NodeId v = 0; v < nodes_; ++v) {
    double total = 0.0;
    for (double x : distribution(v)) {
      if (!(x >= 0.0)) throw std::invalid_argument("belief of node " + std::to_string(v) + " has a negative entry");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("belief of node " + std::to_string(v) + " does not sum to 1");
  }
}

StateId WorldBelief::mode(NodeId node) const {
  const auto d = distribution(node);
  return static_cast<StateId>(std::max_element(d.begin(), d.end()) - d.begin());
}

double WorldBelief::mode_probability(NodeId node) const {
  const auto d = distribution(node);
  return *std::max_element(d.begin(), d.end());
}

bool WorldBelief::is_point_mass(NodeId node) const { return mode_probability(node) == 1.0; }

void WorldBelief::set_point_mass(NodeId node, StateId state) {
  if (node >= nodes_ || state >= states_) throw std::out_of_range("set_point_mass: index out of range");
  auto d = mutable_distribution(node);
  std::fill(d.begin(), d.end(), 0.0);
  d[state] = 1.0;
}

// ---------------------------------------------------------------------------
// Belief operations

WorldBelief collapse_on_visit(const WorldBelief& belief, NodeId node, StateId true_state) {
  WorldBelief out = belief;
  out.set_point_mass(node, true_state);
  return out;
}

WorldState sample_world(const WorldBelief& belief, Rng& rng) {
  WorldState world(belief.node_count());
  for (NodeId v = 0; v < belief.node_count(); ++v)
    world[v] = static_cast<StateId>(rng.categorical(belief.distribution(v)));
  return world;
}

WorldState mode_world(const WorldBelief& belief) {
  WorldState world(belief.node_count());
  for (NodeId v = 0; v < belief.node_count(); ++v) world[v] = belief.mode(v);
  return world;
}

std::vector<double> expected_marginal_utilities(const WorldBelief& belief, std::span<const NodeId> nodes,
                                                const NodeSet& visited, const UtilityFunction& utility) {
  std::vector<double> out(nodes.size(), 0.0);
  std::vector<NodeState> queries;
  std::vector<std::pair<std::size_t, double>> weights;  // (output slot, probability)
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (visited.contains(nodes[i])) continue;
    const auto d = belief.distribution(nodes[i]);
    for (std::size_t x = 0; x < d.size(); ++x) {
      if (d[x] <= 0.0) continue;
      queries.push_back({nodes[i], static_cast<StateId>(x)});
      weights.emplace_back(i, d[x]);
    }
  }
  if (queries.empty()) return out;
  std::vector<double> gains(queries.size());
  utility.marginal_gains(queries, visited, mode_world(belief), gains);
  for (std::size_t q = 0; q < queries.size(); ++q) out[weights[q].first] += weights[q].second * gains[q];
  return out;
}

double expected_marginal_utility(const WorldBelief& belief, NodeId node, const NodeSet& visited,
                                 const UtilityFunction& utility) {
  const NodeId nodes[] = {node};
  return expected_marginal_utilities(belief, nodes, visited, utility).front();
}

double info_gain_estimate(const WorldBelief& belief, const Action& sense_action, const AgentState& state,
                          const SensorModel& sensors, std::size_t n_samples, Rng& rng) {
  if (n_samples == 0) throw std::invalid_argument("info_gain_estimate: n_samples must be at least 1");
  if (!sense_action.is_sense()) throw std::invalid_argument("info_gain_estimate: action is not a sense");

  const std::size_t k = belief.state_count();
  std::vector<double> posterior(k);
  double total = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    for (const auto& entry : sensors.footprint(sense_action.sensor(), state.current)) {
      if (state.visited.contains(entry.node)) continue;
      const auto prior = belief.distribution(entry.node);
      const double prior_mode = *std::max_element(prior.begin(), prior.end());
      if (prior_mode == 1.0) continue;  // a point mass cannot sharpen
      const auto truth = static_cast<StateId>(rng.categorical(prior));
      const StateId reading = sensors.sample_reading(entry.accuracy, truth, rng);
      double z = 0.0;
      for (std::size_t x = 0; x < k; ++x) {
        posterior[x] = prior[x] * sensors.channel(entry.accuracy, reading, static_cast<StateId>(x));
        z += posterior[x];
      }
      const double posterior_mode = *std::max_element(posterior.begin(), posterior.end()) / z;
      total += posterior_mode - prior_mode;
    }
  }
  return total / static_cast<double>(n_samples);
}

}  // namespace aippms
