#include "nestnorm/knapsack.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace nestnorm {

KnapsackResult solve_knapsack_lp(std::span<const KnapsackItem> items, double budget) {
  if (budget < 0.0) throw std::invalid_argument("knapsack budget must be non-negative");
  KnapsackResult res;
  res.u.assign(items.size(), 0.0);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].weight < 0.0) throw std::invalid_argument("knapsack weights must be non-negative");
    if (items[i].value <= 0.0) continue;
    if (items[i].weight == 0.0) {
      res.u[i] = 1.0;
      continue;
    }
    order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    // Cross-multiplied ratio comparison.
    return items[a].value * items[b].weight > items[b].value * items[a].weight;
  });
  double left = budget;
  for (std::size_t i : order) {
    if (left <= 0.0) break;
    if (items[i].weight <= left) {
      res.u[i] = 1.0;
      left -= items[i].weight;
    } else {
      res.u[i] = left / items[i].weight;
      res.fractional = i;
      left = 0.0;
    }
  }
  for (std::size_t i = 0; i < items.size(); ++i) res.value += res.u[i] * items[i].value;
  return res;
}

}  // namespace nestnorm
