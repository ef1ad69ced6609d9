#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "nestnorm/ball_kmedian.hpp"
#include "nestnorm/knapsack.hpp"
#include "nestnorm/metric.hpp"
#include "nestnorm/norms.hpp"

namespace nestnorm {

using CoverSolution = BallSolution;

// Cover every client with at most k balls, paying h(r) per ball.
struct MsrdcInstance {
  const MetricInstance* metric = nullptr;
  std::size_t k = 1;
  ThresholdCost h;

  const MetricInstance& m() const { return *metric; }
};

// Sum of h(r / scale) over the balls.
double msrdc_cost(const MsrdcInstance& inst, const CoverSolution& sol, double scale = 1.0);

bool covers(const MetricInstance& m, const CoverSolution& sol, const std::vector<PointId>& pts);
bool covers_all(const MetricInstance& m, const CoverSolution& sol);

// A pruned facility and the selected one that knocked it out through a shared client.
struct PruneWitness {
  FacilityId pruned;
  FacilityId kept;
  PointId shared;
};

struct MsrdcLmpResult {
  CoverSolution solution;
  std::vector<double> alpha;           // aligned with the client list
  RadiusMap tight_radius;              // r'(x) for every facility with a tight ball
  std::vector<PruneWitness> witnesses;
};

// Radii with h(d) <= mu among distances to the clients, plus 0.
std::vector<double> msrdc_radii(const MsrdcInstance& inst, FacilityId x,
                                const std::vector<PointId>& clients, double mu);

// Primal-dual pass over `clients`. Empty if some client lies in no allowed ball.
std::optional<MsrdcLmpResult> lmp_msrdc(const MsrdcInstance& inst, double lambda, double mu,
                                        const std::vector<PointId>& clients);

struct MsrdcBiPoint {
  CoverSolution first;   // at most k' balls
  CoverSolution second;  // more than k' balls
  double a = 0.0;
  double b = 0.0;
};

struct MsrdcSearch {
  std::variant<std::monostate, CoverSolution, MsrdcBiPoint> outcome;  // monostate: infeasible
  std::size_t probes = 0;
};

MsrdcSearch binary_search_msrdc(const MsrdcInstance& inst, double eps, double mu,
                                const std::vector<PointId>& clients, std::size_t slots);

struct MsrdcRoundingTrace {
  bool shortcut = false;
  KnapsackResult knapsack;
  std::optional<FacilityId> special;
};

CoverSolution round_bipoint_msrdc(const MsrdcInstance& inst, const MsrdcBiPoint& bp,
                                  const std::vector<PointId>& clients, std::size_t slots,
                                  MsrdcRoundingTrace* trace = nullptr);

struct MsrdcOptions {
  std::optional<std::size_t> max_guess_size;
};

struct MsrdcResult {
  CoverSolution solution;
  double cost = 0.0;         // sum of h(r)
  double scaled_cost = 0.0;  // sum of h(r / 9), the quantity the guarantee bounds
  std::size_t guesses_tried = 0;
};

std::size_t msrdc_guess_size(const MsrdcInstance& inst, double eps);

MsrdcResult solve_msrdc(const MsrdcInstance& inst, double eps, const MsrdcOptions& opts = {});

struct LinfOrdOptions {
  double threshold_cap = 1e6;
  MsrdcOptions msrdc;
};

struct LinfOrdResult {
  CoverSolution solution;
  double value = 0.0;            // ord_w of the radii
  std::vector<double> weights;   // sparsified weights used for the winning run
  std::vector<double> thresholds;
  double proxy_bound = 0.0;      // Prox(r; sparsified w, 9t)
  std::size_t thresholds_tried = 0;
};

// Candidate threshold values: 0 and every client-facility distance rounded
// down to a power of (1+eps).
std::vector<double> threshold_candidates(const MetricInstance& m, double eps);

LinfOrdResult solve_linf_ord(const MetricInstance& m, std::size_t k, std::span<const double> w,
                             double eps, const LinfOrdOptions& opts = {});

}  // namespace nestnorm
