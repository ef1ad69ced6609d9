#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nestnorm {

// Sum of the ell largest entries. Throws std::invalid_argument unless 1 <= ell <= |x|.
double top_ell(std::span<const double> x, std::size_t ell);

// w . sort_desc(x). Lengths must match.
double ordered_norm(std::span<const double> w, std::span<const double> x);

// ordered_norm after zero-padding the shorter of the two vectors.
double ordered_norm_padded(std::span<const double> w, std::span<const double> x);

// ell * y + sum_i (x_i -. y).
double proxy_topl(double y, std::span<const double> x, std::size_t ell);

// sum_i (w_i - w_{i+1}) * proxy_topl(t_i, x, i) with w_{n+1} = 0.
// t must be non-increasing and as long as w.
double proxy_ordered(std::span<const double> x, std::span<const double> w,
                     std::span<const double> t);

// Throws std::invalid_argument unless w is non-empty, non-negative and non-increasing.
void check_weights(std::span<const double> w);

// Rounds each w_i down to the nearest w_1 (1+eps)^-j.
std::vector<double> round_weights_down(std::span<const double> w, double eps);

// round_weights_down, then zeroes entries below w_1 * eps / |w|.
std::vector<double> sparsify_weights(std::span<const double> w, double eps);

// Number of distinct non-zero values in a non-increasing vector.
std::size_t nonzero_blocks(std::span<const double> w);

// Rounds each value down to the nearest integer power of (1+eps); 0 stays 0.
double round_down_power(double v, double eps);

class ThresholdCapExceeded : public std::length_error {
 public:
  ThresholdCapExceeded(double count, double cap);
  double count() const { return count_; }

 private:
  double count_;
};

// All non-increasing threshold vectors that are constant on the blocks of equal
// non-zero weights of wt and zero on its zero tail, with values drawn from
// candidates U {0}.
std::vector<std::vector<double>> enumerate_thresholds(std::span<const double> wt,
                                                      std::span<const double> candidates,
                                                      double cap = 1e6);

// h(a) = sum_i diffs_i * (a -. t_i) for the weights wt and thresholds t.
class ThresholdCost {
 public:
  ThresholdCost() = default;
  ThresholdCost(std::vector<double> diffs, std::vector<double> thresholds);
  static ThresholdCost from_weights(std::span<const double> wt, std::span<const double> t);

  double operator()(double a) const;
  const std::vector<double>& diffs() const { return diffs_; }
  const std::vector<double>& thresholds() const { return thresholds_; }

 private:
  std::vector<double> diffs_;
  std::vector<double> thresholds_;
};

}  // namespace nestnorm
