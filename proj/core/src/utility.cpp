#include "aippms/utility.hpp"

#include <stdexcept>

namespace aippms {

double UtilityFunction::marginal_gain(NodeId node, const NodeSet& visited, const WorldState& world) const {
  if (visited.contains(node)) return 0.0;
  NodeSet with = visited;
  with.insert(node);
  return value(with, world) - value(visited, world);
}

void UtilityFunction::marginal_gains(std::span<const NodeState> queries, const NodeSet& visited,
                                     const WorldState& world, std::span<double> out) const {
  WorldState scratch = world;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto [node, state] = queries[i];
    scratch[node] = state;
    out[i] = marginal_gain(node, visited, scratch);
    scratch[node] = world[node];
  }
}

ModularUtility::ModularUtility(std::size_t node_count, std::size_t state_count, std::vector<double> rewards)
    : nodes_(node_count), states_(state_count), rewards_(std::move(rewards)) {
  if (rewards_.size() != nodes_ * states_) throw std::invalid_argument("reward table has the wrong size");
  for (double r : rewards_)
    if (!(r >= 0.0)) throw std::invalid_argument("rewards must be non-negative");
}

double ModularUtility::value(const NodeSet& visited, const WorldState& world) const {
  double total = 0.0;
  for (NodeId v = 0; v < nodes_; ++v)
    if (visited.contains(v)) total += reward(v, world.at(v));
  return total;
}

double ModularUtility::marginal_gain(NodeId node, const NodeSet& visited, const WorldState& world) const {
  return visited.contains(node) ? 0.0 : reward(node, world.at(node));
}

void ModularUtility::marginal_gains(std::span<const NodeState> queries, const NodeSet& visited, const WorldState&,
                                    std::span<double> out) const {
  for (std::size_t i = 0; i < queries.size(); ++i)
    out[i] = visited.contains(queries[i].node) ? 0.0 : reward(queries[i].node, queries[i].state);
}

}  // namespace aippms
