#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nestnorm/ball_kmedian.hpp"
#include "nestnorm/knapsack.hpp"
#include "nestnorm/metric.hpp"

namespace nestnorm {

// Size limits for the brute-force solvers. Larger inputs are refused.
struct OracleBudget {
  std::size_t max_points = 8;
  std::size_t max_facilities = 5;
  std::size_t max_k = 3;
  double max_states = 1e7;

  // Defaults, with max_states taken from NESTNORM_MAX_STATES when set.
  static OracleBudget from_env();
};

class OracleBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactBallResult {
  BallSolution solution;
  double cost = 0.0;
};

// Enumerates facility subsets of size <= k with radii in {0} U d(x, P).
ExactBallResult exact_ball_kmedian(const BallKMedianInstance& inst,
                                   const OracleBudget& budget = {});

// Independent cross-check: enumerates assignments and picks the best radius per cluster.
ExactBallResult exact_ball_kmedian_by_assignment(const BallKMedianInstance& inst,
                                                 const OracleBudget& budget = {});

struct ExactCoverResult {
  BallSolution solution;
  double cost = 0.0;
};

// Minimizes a cost of the radii vector over covering solutions with <= k balls.
ExactCoverResult exact_cover(const MetricInstance& m, std::size_t k,
                             const std::function<double(std::span<const double>)>& cost,
                             const OracleBudget& budget = {});

// ord_w of the radii vector (zero-padded).
ExactCoverResult exact_cover_ord(const MetricInstance& m, std::size_t k,
                                 std::span<const double> w, const OracleBudget& budget = {});

// Sum of h(r) over the balls.
ExactCoverResult exact_msrdc(const MetricInstance& m, std::size_t k,
                             const std::function<double(double)>& h,
                             const OracleBudget& budget = {});

// Best assignment solution under an arbitrary cost of the clustering.
struct ExactAssignmentResult {
  AssignmentSolution solution;
  double cost = 0.0;
};

ExactAssignmentResult exact_assignment(
    const MetricInstance& m, std::size_t k,
    const std::function<double(const AssignmentSolution&)>& cost,
    const OracleBudget& budget = {});

// Optimum of the knapsack LP by enumerating its vertices (at most 12 items).
KnapsackResult exact_knapsack_vertices(std::span<const KnapsackItem> items, double budget);

}  // namespace nestnorm
