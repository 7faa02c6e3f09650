#include "aippms/graph_env.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace aippms {

std::string to_string(const Action& action) {
  return (action.is_move() ? "move:" : "sense:") + std::to_string(action.target);
}

double euclidean(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// ---------------------------------------------------------------------------
// CostMatrix

CostMatrix::CostMatrix(std::size_t n, std::vector<Energy> costs, std::vector<NodeId> next_hop)
    : n_(n), costs_(std::move(costs)), next_hop_(std::move(next_hop)) {}

std::vector<NodeId> CostMatrix::path(NodeId u, NodeId v) const {
  std::vector<NodeId> out{u};
  while (u != v) {
    u = next_hop_[u * n_ + v];
    out.push_back(u);
  }
  return out;
}

CostMatrix all_pairs_shortest_costs(std::size_t n, std::span<const Edge> edges) {
  constexpr Energy kInf = std::numeric_limits<Energy>::infinity();
  std::vector<Energy> dist(n * n, kInf);
  std::vector<NodeId> next(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    dist[i * n + i] = 0.0;
    next[i * n + i] = static_cast<NodeId>(i);
  }
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw GraphError("edge endpoint out of range");
    if (e.weight < dist[e.u * n + e.v]) {
      dist[e.u * n + e.v] = dist[e.v * n + e.u] = e.weight;
      next[e.u * n + e.v] = e.v;
      next[e.v * n + e.u] = e.u;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const Energy dik = dist[i * n + k];
      if (dik == kInf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const Energy through = dik + dist[k * n + j];
        if (through < dist[i * n + j]) {
          dist[i * n + j] = through;
          next[i * n + j] = next[i * n + k];
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist[i * n + j] == kInf) {
        std::ostringstream msg;
        msg << "graph is disconnected: no path between nodes " << i << " and " << j;
        throw GraphError(msg.str());
      }
      // Symmetrise away any asymmetric rounding from the relaxation order.
      const Energy d = std::min(dist[i * n + j], dist[j * n + i]);
      dist[i * n + j] = dist[j * n + i] = d;
    }
  }
  return CostMatrix(n, std::move(dist), std::move(next));
}

// ---------------------------------------------------------------------------
// LocationGraph

LocationGraph::LocationGraph(std::vector<Point> positions, std::vector<Edge> edges, NodeId start,
                             NodeId goal)
    : positions_(std::move(positions)), edges_(std::move(edges)), start_(start), goal_(goal) {
  const std::size_t n = positions_.size();
  if (n == 0) throw GraphError("location graph has no nodes");
  if (start_ >= n || goal_ >= n) throw GraphError("start or goal is not a node of the graph");

  direct_.assign(n * n, std::numeric_limits<Energy>::infinity());
  adjacency_.assign(n, {});
  for (const auto& e : edges_) {
    if (e.u >= n || e.v >= n) {
      std::ostringstream msg;
      msg << "edge (" << e.u << ", " << e.v << ") references a missing node";
      throw GraphError(msg.str());
    }
    if (e.u == e.v) throw GraphError("self-loop on node " + std::to_string(e.u));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      std::ostringstream msg;
      msg << "edge (" << e.u << ", " << e.v << ") has non-positive weight " << e.weight;
      throw GraphError(msg.str());
    }
    if (std::isfinite(direct_[e.u * n + e.v])) {
      std::ostringstream msg;
      msg << "duplicate edge (" << e.u << ", " << e.v << ")";
      throw GraphError(msg.str());
    }
    direct_[e.u * n + e.v] = direct_[e.v * n + e.u] = e.weight;
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  costs_ = all_pairs_shortest_costs(n, edges_);
}

std::optional<Energy> LocationGraph::edge_weight(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count() || u == v) return std::nullopt;
  const Energy w = weight(u, v);
  if (!std::isfinite(w)) return std::nullopt;
  return w;
}

// ---------------------------------------------------------------------------
// Sensors and agent state

double SensorSpec::fidelity(double distance) const {
  return max_fidelity * std::pow(decay_rate, distance);
}

void SensorSpec::validate() const {
  if (!(cost > 0.0)) throw ConfigError("sensor '" + name + "': cost must be positive");
  if (!(max_fidelity > 0.0 && max_fidelity <= 1.0))
    throw ConfigError("sensor '" + name + "': max fidelity must lie in (0, 1]");
  if (!(decay_rate > 0.0 && decay_rate <= 1.0))
    throw ConfigError("sensor '" + name + "': decay rate must lie in (0, 1]");
  if (!(range > 0.0)) throw ConfigError("sensor '" + name + "': range must be positive");
}

AgentState AgentState::initial(const LocationGraph& graph, Energy budget) {
  AgentState s;
  s.current = graph.start();
  s.visited = NodeSet(graph.node_count());
  s.visited.insert(graph.start());
  s.remaining_budget = budget;
  return s;
}

Energy action_cost(const AgentState& state, const Action& action, const LocationGraph& graph,
                   std::span<const SensorSpec> sensors) {
  if (action.is_sense()) {
    if (action.sensor() >= sensors.size())
      throw InvalidAction("unknown sensor id " + std::to_string(action.sensor()));
    return sensors[action.sensor()].cost;
  }
  if (action.node() == state.current)
    throw InvalidAction("move to the current node " + std::to_string(action.node()));
  const auto w = graph.edge_weight(state.current, action.node());
  if (!w) {
    throw InvalidAction("node " + std::to_string(action.node()) + " is not a neighbour of " +
                        std::to_string(state.current));
  }
  return *w;
}

bool is_feasible_state(const AgentState& state, const CostMatrix& costs, NodeId goal) {
  return state.remaining_budget + kEnergyTolerance >= costs(state.current, goal);
}

std::vector<Action> feasible_actions(const AgentState& state, const LocationGraph& graph,
                                     std::span<const SensorSpec> sensors, const CostMatrix& costs,
                                     bool sensing_allowed) {
  std::vector<Action> out;
  const NodeId goal = graph.goal();
  const Energy budget = state.remaining_budget + kEnergyTolerance;
  for (NodeId v : graph.neighbors(state.current)) {
    const Energy w = *graph.edge_weight(state.current, v);
    if (w + costs(v, goal) <= budget) out.push_back(Action::move(v));
  }
  if (sensing_allowed) {
    const Energy return_cost = costs(state.current, goal);
    for (SensorId s = 0; s < sensors.size(); ++s)
      if (sensors[s].cost + return_cost <= budget) out.push_back(Action::sense(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// TSP estimate

namespace {

Energy tour_cost(const std::vector<NodeId>& tour, const CostMatrix& costs) {
  Energy total = 0.0;
  for (std::size_t i = 0; i < tour.size(); ++i) total += costs(tour[i], tour[(i + 1) % tour.size()]);
  return total;
}

}  // namespace

Energy tsp_cost_estimate(const LocationGraph& graph, NodeId start, const CostMatrix& costs) {
  const std::size_t n = graph.node_count();
  if (n <= 1) return 0.0;

  std::vector<NodeId> tour{start};
  std::vector<bool> used(n, false);
  used[start] = true;
  for (std::size_t step = 1; step < n; ++step) {
    const NodeId from = tour.back();
    NodeId best = 0;
    Energy best_cost = std::numeric_limits<Energy>::infinity();
    for (NodeId v = 0; v < n; ++v) {
      if (!used[v] && costs(from, v) < best_cost) {
        best_cost = costs(from, v);
        best = v;
      }
    }
    used[best] = true;
    tour.push_back(best);
  }

  // 2-opt on the closed tour; position 0 (the start) stays fixed.
  constexpr Energy kImprovement = 1e-12;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const NodeId a = tour[i - 1], b = tour[i], c = tour[j], d = tour[(j + 1) % n];
        const Energy delta = costs(a, c) + costs(b, d) - costs(a, b) - costs(c, d);
        if (delta < -kImprovement) {
          std::reverse(tour.begin() + static_cast<std::ptrdiff_t>(i),
                       tour.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          improved = true;
        }
      }
    }
  }
  return tour_cost(tour, costs);
}

}  // namespace aippms
