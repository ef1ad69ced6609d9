#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nestnorm/ball_kmedian.hpp"
#include "nestnorm/metric.hpp"

namespace nestnorm {

// Monotone symmetric norms understood by the solvers.
struct NormSpec {
  enum class Kind { L1, Linf, Topl, Ord, SymMaxOrd };
  Kind kind = Kind::L1;
  std::size_t ell = 0;                       // Topl
  std::vector<double> w;                     // Ord
  std::vector<std::vector<double>> ws;       // SymMaxOrd: max of several ordered norms

  static NormSpec l1() { return {Kind::L1, 0, {}, {}}; }
  static NormSpec linf() { return {Kind::Linf, 0, {}, {}}; }
  static NormSpec topl(std::size_t ell) { return {Kind::Topl, ell, {}, {}}; }
  static NormSpec ord(std::vector<double> w) { return {Kind::Ord, 0, std::move(w), {}}; }
  static NormSpec sym_max_ord(std::vector<std::vector<double>> ws) {
    return {Kind::SymMaxOrd, 0, {}, std::move(ws)};
  }

  // Parses "l1", "linf", "topl:8", "ord:1,0.5,0.25" or "sym:1,0;0.5,0.5".
  static NormSpec parse(const std::string& text);
  std::string describe() const;
  void validate() const;
};

// Norm of x; Topl and Ord zero-pad x (Topl clamps ell to |x|).
double evaluate_norm(const NormSpec& norm, std::span<const double> x);

// outer(inner(d(P_1, x_1)), ..., inner(d(P_k, x_k))), with cluster vectors of
// length |P| and the outer vector zero-padded to length k.
double nested_cost(const MetricInstance& m, std::size_t k, const NormSpec& inner,
                   const NormSpec& outer, const AssignmentSolution& sol);

// Clients assigned to a covering ball, nearest first, ties by id.
AssignmentSolution assign_to_cover(const MetricInstance& m, const BallSolution& cover);

struct Approximation {
  AssignmentSolution solution;
  std::optional<BallSolution> balls;
  double cost = 0.0;    // nested cost under the requested objective
  double factor = 0.0;  // proven approximation factor for this route
  std::string route;
  std::size_t guesses_tried = 0;
  double lambda_final = 0.0;
  std::optional<double> ord_value;  // ordered norm of the radii, for cover routes
};

// Solver for a fixed pair of norms. The returned factor is its proven ratio.
struct NestedSolver {
  std::function<Approximation(const MetricInstance&, std::size_t)> run;
  std::string name;
};

// Inner Ord(w) through an L1-inner solver: factor * w_1 * |P| / W.
Approximation reduce_inner_ord_to_l1(const MetricInstance& m, std::size_t k,
                                     const std::vector<double>& w, const NormSpec& outer,
                                     const NestedSolver& l1_solver);

// Inner Ord(w) through an Linf-inner solver: factor * W / w_1.
Approximation reduce_inner_ord_to_linf(const MetricInstance& m, std::size_t k,
                                       const std::vector<double>& w, const NormSpec& outer,
                                       const NestedSolver& linf_solver);

// Runs both and keeps the cheaper solution under the true objective.
Approximation best_of_pair(const MetricInstance& m, std::size_t k, const std::vector<double>& w,
                           const NormSpec& outer, const NestedSolver& l1_solver,
                           const NestedSolver& linf_solver);

// Outer Ord(w) through an outer-L1 solver (factor * w_1 * k / W) or an
// outer-Linf solver (factor * W / w_1).
Approximation reduce_outer_ord_to_l1(const MetricInstance& m, std::size_t k,
                                     const NormSpec& inner, const std::vector<double>& w,
                                     const NestedSolver& l1_solver);
Approximation reduce_outer_ord_to_linf(const MetricInstance& m, std::size_t k,
                                       const NormSpec& inner, const std::vector<double>& w,
                                       const NestedSolver& linf_solver);

// Averaged weights of a max-of-ordered norm f: ord_avg <= f <= count * ord_avg.
std::vector<double> averaged_weights(const std::vector<std::vector<double>>& ws);

struct DispatchOptions {
  std::optional<std::size_t> max_guess_size;
};

// Picks a route for (inner, outer) and reports its factor.
Approximation dispatch(const MetricInstance& m, std::size_t k, const NormSpec& inner,
                       const NormSpec& outer, double eps, const DispatchOptions& opts = {});

}  // namespace nestnorm
