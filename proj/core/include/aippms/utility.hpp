#pragma once

#include <span>
#include <vector>

#include "aippms/types.hpp"

namespace aippms {

using WorldState = std::vector<StateId>;

/// A node paired with a hypothesised state for that node.
struct NodeState {
  NodeId node = 0;
  StateId state = 0;
};

/// Monotone set function F(P, world) >= 0 with F(empty, world) = 0.
/// Domains supply the concrete function; marginal gains are the discrete
/// derivative F(P + {v}) - F(P).
class UtilityFunction {
 public:
  virtual ~UtilityFunction() = default;

  virtual double value(const NodeSet& visited, const WorldState& world) const = 0;

  /// Delta(node | visited)(world).
  virtual double marginal_gain(NodeId node, const NodeSet& visited, const WorldState& world) const;

  /// Batched marginal gains where queries[i].node is evaluated in state
  /// queries[i].state regardless of world[queries[i].node]. Other nodes take
  /// their state from world. Queries on visited nodes yield 0.
  virtual void marginal_gains(std::span<const NodeState> queries, const NodeSet& visited,
                              const WorldState& world, std::span<double> out) const;
};

/// Additive utility: each visited node contributes reward(node, state).
/// Modular, hence trivially submodular.
class ModularUtility : public UtilityFunction {
 public:
  /// rewards is row-major [node][state] and must be non-negative.
  ModularUtility(std::size_t node_count, std::size_t state_count, std::vector<double> rewards);

  double reward(NodeId node, StateId state) const { return rewards_[node * states_ + state]; }
  std::size_t node_count() const { return nodes_; }
  std::size_t state_count() const { return states_; }

  double value(const NodeSet& visited, const WorldState& world) const override;
  double marginal_gain(NodeId node, const NodeSet& visited, const WorldState& world) const override;
  void marginal_gains(std::span<const NodeState> queries, const NodeSet& visited, const WorldState& world,
                      std::span<double> out) const override;

 private:
  std::size_t nodes_;
  std::size_t states_;
  std::vector<double> rewards_;
};

}  // namespace aippms
