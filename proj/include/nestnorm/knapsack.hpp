#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nestnorm {

struct KnapsackItem {
  double value = 0.0;
  double weight = 0.0;
};

struct KnapsackResult {
  std::vector<double> u;
  double value = 0.0;
  std::optional<std::size_t> fractional;  // index of the single fractional item
};

// LP relaxation of the 0/1 knapsack: max sum v_i u_i subject to
// sum w_i u_i <= budget, u in [0,1]. Greedy by value/weight ratio, ties by index.
// Throws std::invalid_argument for a negative budget or weight.
KnapsackResult solve_knapsack_lp(std::span<const KnapsackItem> items, double budget);

}  // namespace nestnorm
