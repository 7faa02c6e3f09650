#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aippms/types.hpp"

namespace aippms {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double euclidean(const Point& a, const Point& b);

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  Energy weight = 0.0;
};

/// Dense all-pairs shortest-path costs C_G(u, v) plus a next-hop table for
/// expanding metric-closure legs back into concrete edges.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t n, std::vector<Energy> costs, std::vector<NodeId> next_hop);

  std::size_t size() const { return n_; }
  Energy operator()(NodeId u, NodeId v) const { return costs_[u * n_ + v]; }

  /// Node sequence of a shortest path from u to v, both endpoints included.
  std::vector<NodeId> path(NodeId u, NodeId v) const;

 private:
  std::size_t n_ = 0;
  std::vector<Energy> costs_;
  std::vector<NodeId> next_hop_;
};

/// Floyd-Warshall over an undirected edge list. Throws GraphError naming the
/// first unreachable pair when the graph is disconnected.
CostMatrix all_pairs_shortest_costs(std::size_t node_count, std::span<const Edge> edges);

/// Weighted undirected location graph with start and goal. Immutable; the
/// shortest-path matrix is computed once at construction.
class LocationGraph {
 public:
  LocationGraph(std::vector<Point> positions, std::vector<Edge> edges, NodeId start, NodeId goal);

  std::size_t node_count() const { return positions_.size(); }
  NodeId start() const { return start_; }
  NodeId goal() const { return goal_; }

  const Point& position(NodeId v) const { return positions_.at(v); }
  std::span<const Point> positions() const { return positions_; }
  std::span<const Edge> edges() const { return edges_; }

  /// Sorted neighbour list of v.
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_.at(v); }
  bool has_edge(NodeId u, NodeId v) const { return std::isfinite(weight(u, v)) && u != v; }
  std::optional<Energy> edge_weight(NodeId u, NodeId v) const;

  /// Euclidean distance between node positions (used for sensing fidelity,
  /// never for travel cost).
  double distance(NodeId u, NodeId v) const { return euclidean(position(u), position(v)); }

  const CostMatrix& costs() const { return costs_; }

 private:
  Energy weight(NodeId u, NodeId v) const { return direct_[u * node_count() + v]; }

  std::vector<Point> positions_;
  std::vector<Edge> edges_;
  NodeId start_;
  NodeId goal_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<Energy> direct_;
  CostMatrix costs_;
};

struct SensorSpec {
  std::string name;
  Energy cost = 1.0;
  double max_fidelity = 1.0;  // A
  double decay_rate = 1.0;    // r, per unit distance
  double range = std::numeric_limits<double>::infinity();

  /// Probability of a correct reading at distance d: A * r^d.
  double fidelity(double distance) const;
  void validate() const;
};

/// The fully observable part of the POMDP state.
struct AgentState {
  NodeId current = 0;
  NodeSet visited;
  Energy remaining_budget = 0.0;

  static AgentState initial(const LocationGraph& graph, Energy budget);
  friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// Energy cost of an action. Throws InvalidAction for a move to a non-neighbour
/// or to the current node, and for unknown sensors.
Energy action_cost(const AgentState& state, const Action& action, const LocationGraph& graph,
                   std::span<const SensorSpec> sensors);

/// Node the agent occupies after the action.
inline NodeId next_node(const AgentState& state, const Action& action) {
  return action.is_move() ? action.node() : state.current;
}

/// remaining_budget >= C_G(current, goal), up to kEnergyTolerance.
bool is_feasible_state(const AgentState& state, const CostMatrix& costs, NodeId goal);

/// Actions whose deterministic successor is still a feasible state, in
/// action-id order. sensing_allowed=false removes every Sense (domains that
/// restrict sensing to specific nodes).
std::vector<Action> feasible_actions(const AgentState& state, const LocationGraph& graph,
                                     std::span<const SensorSpec> sensors, const CostMatrix& costs,
                                     bool sensing_allowed = true);

/// Closed-tour cost from start through every node on the metric closure:
/// nearest-neighbour construction, then 2-opt until no improving move.
Energy tsp_cost_estimate(const LocationGraph& graph, NodeId start, const CostMatrix& costs);

}  // namespace aippms
