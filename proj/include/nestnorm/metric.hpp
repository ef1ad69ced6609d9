#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nestnorm {

using PointId = std::size_t;
using FacilityId = std::size_t;

// Comparisons that are exact in theory use this absolute slack.
inline constexpr double kExactTol = 1e-9;

// Truncated subtraction a -. b.
inline double dotdiv(double a, double b) { return a > b ? a - b : 0.0; }

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// A location in the metric: either a client point or a facility.
struct Site {
  enum class Kind { Point, Facility };
  Kind kind;
  std::size_t index;

  static Site point(PointId p) { return {Kind::Point, p}; }
  static Site facility(FacilityId x) { return {Kind::Facility, x}; }
};

// Finite metric over n client points and m facilities. Distances are kept in a
// dense (n+m)x(n+m) matrix with points first.
class MetricInstance {
 public:
  MetricInstance() = default;
  MetricInstance(std::size_t num_points, std::size_t num_facilities,
                 std::vector<double> matrix);

  static MetricInstance planar(std::vector<Point2> points,
                               std::vector<Point2> facilities);

  std::size_t num_points() const { return n_; }
  std::size_t num_facilities() const { return m_; }

  // Point-to-facility distance. Throws std::out_of_range on bad ids.
  double dist(PointId p, FacilityId x) const;
  double facility_dist(FacilityId a, FacilityId b) const;
  double point_dist(PointId a, PointId b) const;
  double site_dist(Site a, Site b) const;

  bool has_coordinates() const { return !points_.empty() || !facilities_.empty(); }
  const std::vector<Point2>& point_coords() const { return points_; }
  const std::vector<Point2>& facility_coords() const { return facilities_; }
  const std::vector<double>& matrix() const { return d_; }

  double max_distance() const;
  // Smallest strictly positive point-facility distance, 0 if there is none.
  double min_positive_distance() const;

 private:
  std::size_t node(Site s) const;

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<double> d_;
  std::vector<Point2> points_;
  std::vector<Point2> facilities_;
};

// Facilities with their radii, keyed by facility id.
using RadiusMap = std::map<FacilityId, double>;

struct BallSolution {
  RadiusMap radius;

  std::size_t size() const { return radius.size(); }
  bool empty() const { return radius.empty(); }
  std::vector<FacilityId> facilities() const;
  std::vector<double> radii() const;
  // Adds a ball; an existing facility keeps the larger radius.
  void open(FacilityId x, double r);
};

double truncated_dist(const MetricInstance& m, PointId p, FacilityId x, double r);

// (d(a,b) -. ra) -. rb. Clients carry radius 0.
double dstar(const MetricInstance& m, Site a, Site b, double ra, double rb);

// dstar with the first radius inflated to ra + 2*group_max.
double dstarstar(const MetricInstance& m, Site a, Site b, double ra, double rb,
                 double group_max);

struct MetricViolation {
  enum class Kind { Negative, Diagonal, Asymmetric, Triangle };
  Kind kind;
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t c = 0;
  std::string describe() const;
};

// O(n^3) check over all nodes of the matrix. Returns the first violation found.
std::optional<MetricViolation> validate_metric(const MetricInstance& m,
                                               double tol = kExactTol);

}  // namespace nestnorm
