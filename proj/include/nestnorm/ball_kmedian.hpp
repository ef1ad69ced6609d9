#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "nestnorm/dual_ascent.hpp"
#include "nestnorm/knapsack.hpp"
#include "nestnorm/metric.hpp"

namespace nestnorm {

// Ball k-Median: open at most k balls, pay rho per unit of radius and
// d(p, x) -. r(x) for each client to its best ball.
struct BallKMedianInstance {
  const MetricInstance* metric = nullptr;
  std::size_t k = 1;
  double rho = 1.0;

  const MetricInstance& m() const { return *metric; }
};

// Clients grouped around opened facilities.
struct AssignmentSolution {
  std::vector<FacilityId> centers;
  std::vector<FacilityId> assign;  // facility serving each point
};

double ball_kmedian_cost(const BallKMedianInstance& inst, const BallSolution& sol);

// Radius per center: the ell-th largest distance in its cluster (0 if smaller).
BallSolution reduce_topl_solution(const MetricInstance& m, const AssignmentSolution& sol,
                                  std::size_t ell);

// Each client goes to the ball with the least truncated distance, ties by id.
AssignmentSolution lift_ball_solution(const MetricInstance& m, const BallSolution& sol);

// Sum over centers of top_ell of the cluster's distance vector (length |P|).
double topl_l1_cost(const MetricInstance& m, const AssignmentSolution& sol, std::size_t ell);

// Guessed balls of the optimum.
struct Guess {
  RadiusMap radius;
};

std::size_t ball_guess_size(const BallKMedianInstance& inst, double eps);

// Candidate radii for a guessed facility: {0} U distances from it to clients.
std::vector<double> guess_radii(const MetricInstance& m, FacilityId x);

// Visits every guess with exactly `size` facilities. Return false to stop.
void for_each_guess(const MetricInstance& m, std::size_t size,
                    const std::function<bool(const Guess&)>& visit);

// All guesses of size ball_guess_size(inst, eps).
std::vector<Guess> enumerate_guesses(const BallKMedianInstance& inst, double eps);

// Final dual values of one primal-dual run.
struct DualState {
  std::vector<AscentBall> balls;
  std::vector<double> alpha;
  std::vector<bool> tight;
  RadiusMap tight_radius;                 // r'(x): largest tight radius per facility
  std::vector<std::size_t> tight_ball;    // ball index of r'(x), aligned with selected
  std::vector<FacilityId> selected;       // X \ T after pruning
  std::vector<std::vector<PointId>> contributors;  // P_x for selected facilities

  double beta(std::size_t b, PointId p) const { return dotdiv(alpha[p], balls[b].offset[p]); }
};

struct LmpResult {
  BallSolution solution;
  DualState dual;
};

// Allowed radii for x outside the guess: distances up to the smallest guessed radius, and 0.
std::vector<double> allowed_radii(const MetricInstance& m, FacilityId x, const Guess& guess);

LmpResult lmp_primal_dual(const BallKMedianInstance& inst, double lambda, const Guess& guess);

// Largest violation of the dual constraints (<= 0 means feasible).
double dual_violation(const BallKMedianInstance& inst, double lambda, const Guess& guess,
                      const DualState& dual);

// lhs - rhs of the contributing-client identity.
double contributing_identity_gap(const BallKMedianInstance& inst, double lambda,
                                 const Guess& guess, const LmpResult& lmp);

// Largest value of min_x d^r(p,x) - 3 alpha_p over non-contributing clients.
double noncontributing_excess(const BallKMedianInstance& inst, const LmpResult& lmp);

struct BiPointSolution {
  BallSolution first;   // at most k facilities
  BallSolution second;  // more than k facilities
  double a = 0.0;
  double b = 0.0;
  double lambda_first = 0.0;
  double lambda_second = 0.0;
};

struct BipointSearch {
  std::variant<BallSolution, BiPointSolution> outcome;
  double lambda = 0.0;
  std::size_t probes = 0;
};

BipointSearch binary_search_bipoint(const BallKMedianInstance& inst, double eps,
                                    const Guess& guess);

// Grouping of the larger solution around the smaller one. cl1 and cl2 pick the
// closest ball under the truncated distance, ties by raw distance then id.
struct GroupStructure {
  std::map<FacilityId, FacilityId> cl1_of_facility;  // X2 -> X1
  std::vector<FacilityId> cl1_of_point;              // P -> X1
  std::vector<FacilityId> cl2_of_point;              // P -> X2
  std::map<FacilityId, std::vector<FacilityId>> groups;  // X1 -> G_x, partitions X2
  RadiusMap group_sum;     // sum of r2 over G_x
  RadiusMap group_max;     // max of r2 over G_x, 0 if empty
  RadiusMap inflated;      // r1(x) + 2 * group_max(x)
};

GroupStructure build_groups(const BallKMedianInstance& inst, const BiPointSolution& bp);

struct RoundingTrace {
  bool shortcut = false;
  KnapsackResult knapsack;
  std::optional<FacilityId> special;
  double u = 0.0;
  double opened_fraction = 0.0;  // share of the special group that was opened
  double ratio = 0.0;            // (1 - opened_fraction) / (1 - u)
};

BallSolution round_bipoint(const BallKMedianInstance& inst, const BiPointSolution& bp,
                           const Guess& guess, RoundingTrace* trace = nullptr);

struct BallKMedianOptions {
  // Caps the guess size below the default; 0 runs the primal-dual without guesses.
  std::optional<std::size_t> max_guess_size;
};

struct BallKMedianResult {
  BallSolution solution;
  double cost = 0.0;
  double epsilon = 0.0;
  std::size_t guesses_tried = 0;
  double lambda_final = 0.0;
};

BallKMedianResult solve_ball_kmedian(const BallKMedianInstance& inst, double eps,
                                     const BallKMedianOptions& opts = {});

}  // namespace nestnorm
