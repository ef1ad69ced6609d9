#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nestnorm/metric.hpp"
#include "nestnorm/reductions.hpp"

namespace nestnorm {

// Raised when an input file cannot be opened or read.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemInstance {
  MetricInstance metric;
  std::size_t k = 1;
  std::optional<NormSpec> inner;
  std::optional<NormSpec> outer;
  std::vector<int> labels;  // ground truth, when known
};

NormSpec norm_from_json(const nlohmann::json& j);
nlohmann::json norm_to_json(const NormSpec& norm);

// Planar instances give "points" and "facilities" as [x, y] pairs. Matrix
// instances give "matrix" over points then facilities, with "facilities" set to
// the facility count.
ProblemInstance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const ProblemInstance& inst);

ProblemInstance load_instance(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json load_json(const std::filesystem::path& path);

nlohmann::json result_to_json(const MetricInstance& m, const Approximation& a, double eps);
BallSolution balls_from_result(const nlohmann::json& j);
AssignmentSolution assignment_from_result(const nlohmann::json& j);

}  // namespace nestnorm
