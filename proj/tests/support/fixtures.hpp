#pragma once

#include <memory>
#include <vector>

#include "aippms/pomdp.hpp"

namespace aippms::fixture {

/// s(0) - a(1) - g(2) with a shortcut s-g. Edges s-a 1, a-g 1, s-g 1.5,
/// budget 2.5. Visiting a pays 10 in either state; one sensor (cost 0.5,
/// accuracy 0.8) reads a from s. Optimal first action: Move(a).
Problem triangle();

/// s(0), x(1), y(2), g(3). Edges s-x, s-y, x-g, y-g, s-g all weight 1,
/// budget 2.5. x and y are good with probability 0.5 and pay 10 when good.
/// A perfect sensor (cost 0.25) reads x and y from s. Only one of x, y fits
/// the budget, so sensing first is optimal.
Problem sense_flip();

struct RandomSpec {
  std::size_t nodes = 8;
  std::size_t states = 2;
  std::size_t extra_edges = 4;
  double budget_factor = 0.8;  // times the closed-tour estimate
  bool distinct_goal = true;
};

/// Random connected graph with distance-decay sensors and a modular utility.
Problem random_problem(const RandomSpec& spec, Rng& rng);

/// Modular utility with reward[v][x] for a compact builder.
std::shared_ptr<const UtilityFunction> modular(std::vector<std::vector<double>> rewards);

}  // namespace aippms::fixture
