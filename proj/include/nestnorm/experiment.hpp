#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nestnorm/ball_kmedian.hpp"
#include "nestnorm/metric.hpp"

namespace nestnorm {

struct GaussianCluster {
  Point2 center;
  double stddev = 1.0;
  std::size_t count = 1;
};

struct GeneratorSpec {
  std::uint64_t seed = 0;
  std::vector<GaussianCluster> clusters;
  enum class FacilityMode { OnPoints, Grid } facility_mode = FacilityMode::OnPoints;
  double grid_step = 1.0;
};

struct GeneratedInstance {
  MetricInstance metric;
  std::vector<int> labels;
};

// Deterministic for a fixed GeneratorSpec. Coordinates are rounded to 1e-6.
GeneratedInstance generate(const GeneratorSpec& spec);

// Fraction of points whose cluster matches the ground truth under the best
// matching of clusters to labels (exhaustive for up to 8 groups).
double recovery_score(const AssignmentSolution& sol, const std::vector<int>& labels);

// SVG scatter plot: points colored by assignment, opened centers marked and one
// circle per ball. Throws std::invalid_argument for instances without coordinates.
std::string render_svg(const MetricInstance& m, const AssignmentSolution* sol,
                       const BallSolution* balls, const std::string& title = "");

}  // namespace nestnorm
