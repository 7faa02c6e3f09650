#pragma once

#include <functional>
#include <span>
#include <vector>

#include "aippms/pomdp.hpp"

namespace aippms::oracle {

/// Per-source Dijkstra with a binary heap. Row-major n x n, infinity when
/// unreachable.
std::vector<double> dijkstra_all_pairs(std::size_t n, std::span<const Edge> edges);

/// Cheapest closed tour from start through every node, by permutation.
double brute_force_tour(const CostMatrix& costs, NodeId start);

using Likelihood = std::function<double(NodeId node, StateId observed, StateId truth)>;

/// Posterior marginals [node][state] by enumerating every joint world.
std::vector<std::vector<double>> joint_posterior(const WorldBelief& prior, const Observation& obs,
                                                 const Likelihood& likelihood);

struct QValue {
  Action action;
  double value = 0.0;
};

struct ExpectimaxResult {
  std::vector<QValue> q;  // root actions in feasible order
  double value = 0.0;

  /// Root action with the largest value; ties to the lowest action id.
  Action best() const;
  /// Gap between the best and second-best root values (infinity if unique).
  double margin() const;
};

/// Exact discounted optimum over joint worlds for tiny instances. Beliefs are
/// joint distributions; observations are enumerated exhaustively from the
/// sensor model's channel.
ExpectimaxResult expectimax(const Problem& problem, const AgentState& state, const WorldBelief& belief, double gamma,
                            int horizon);

}  // namespace aippms::oracle
