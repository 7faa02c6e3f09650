#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace aippms {

using NodeId = std::uint32_t;
using SensorId = std::uint32_t;
using StateId = std::uint8_t;

/// Energy is measured in the same units as edge weights and sensor costs.
using Energy = double;

/// Slack used in every budget comparison. Remaining budgets are produced by
/// repeated subtraction while shortest-path costs are produced by repeated
/// addition, so exact-equality legs can differ by a few ulps.
inline constexpr double kEnergyTolerance = 1e-9;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidAction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InconsistentObservation : public std::runtime_error {
 public:
  InconsistentObservation(NodeId node, const std::string& what)
      : std::runtime_error(what), node_(node) {}
  NodeId node() const noexcept { return node_; }

 private:
  NodeId node_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Either a move to a neighbouring node or the use of a sensor at the current
/// node. The defaulted ordering (all moves by target, then all senses by
/// sensor) is the "action id" order used for deterministic tie-breaking.
struct Action {
  enum class Kind : std::uint8_t { Move = 0, Sense = 1 };

  Kind kind = Kind::Move;
  std::uint32_t target = 0;

  static constexpr Action move(NodeId node) { return {Kind::Move, node}; }
  static constexpr Action sense(SensorId sensor) { return {Kind::Sense, sensor}; }

  constexpr bool is_move() const { return kind == Kind::Move; }
  constexpr bool is_sense() const { return kind == Kind::Sense; }
  constexpr NodeId node() const { return target; }
  constexpr SensorId sensor() const { return target; }

  friend constexpr auto operator<=>(const Action&, const Action&) = default;
};

std::string to_string(const Action& action);

/// Fixed-capacity set of node ids backed by 64-bit words.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t capacity) : capacity_(capacity), words_((capacity + 63) / 64, 0) {}

  std::size_t capacity() const { return capacity_; }

  bool contains(NodeId node) const {
    return node < capacity_ && ((words_[node >> 6] >> (node & 63)) & 1u) != 0;
  }

  void insert(NodeId node) {
    if (node >= capacity_) throw std::out_of_range("NodeSet::insert: node out of range");
    words_[node >> 6] |= std::uint64_t{1} << (node & 63);
  }

  void erase(NodeId node) {
    if (node < capacity_) words_[node >> 6] &= ~(std::uint64_t{1} << (node & 63));
  }

  std::size_t size() const {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  bool empty() const { return size() == 0; }

  std::vector<NodeId> to_vector() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < capacity_; ++v)
      if (contains(v)) out.push_back(v);
    return out;
  }

  bool is_subset_of(const NodeSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      const auto theirs = i < other.words_.size() ? other.words_[i] : 0;
      if ((words_[i] & ~theirs) != 0) return false;
    }
    return true;
  }

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::size_t capacity_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace aippms
