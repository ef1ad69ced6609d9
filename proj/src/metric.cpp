#include "nestnorm/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nestnorm {

MetricInstance::MetricInstance(std::size_t num_points, std::size_t num_facilities,
                               std::vector<double> matrix)
    : n_(num_points), m_(num_facilities), d_(std::move(matrix)) {
  const std::size_t total = n_ + m_;
  if (d_.size() != total * total) {
    throw std::invalid_argument("distance matrix must be (points+facilities)^2, got " +
                                std::to_string(d_.size()) + " entries");
  }
}

MetricInstance MetricInstance::planar(std::vector<Point2> points,
                                      std::vector<Point2> facilities) {
  const std::size_t n = points.size();
  const std::size_t total = n + facilities.size();
  auto at = [&](std::size_t i) -> const Point2& {
    return i < n ? points[i] : facilities[i - n];
  };
  std::vector<double> d(total * total, 0.0);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = i + 1; j < total; ++j) {
      const double v = std::hypot(at(i).x - at(j).x, at(i).y - at(j).y);
      d[i * total + j] = v;
      d[j * total + i] = v;
    }
  }
  MetricInstance out(n, facilities.size(), std::move(d));
  out.points_ = std::move(points);
  out.facilities_ = std::move(facilities);
  return out;
}

std::size_t MetricInstance::node(Site s) const {
  if (s.kind == Site::Kind::Point) {
    if (s.index >= n_) throw std::out_of_range("point id " + std::to_string(s.index));
    return s.index;
  }
  if (s.index >= m_) throw std::out_of_range("facility id " + std::to_string(s.index));
  return n_ + s.index;
}

double MetricInstance::site_dist(Site a, Site b) const {
  return d_[node(a) * (n_ + m_) + node(b)];
}

double MetricInstance::dist(PointId p, FacilityId x) const {
  return site_dist(Site::point(p), Site::facility(x));
}

double MetricInstance::facility_dist(FacilityId a, FacilityId b) const {
  return site_dist(Site::facility(a), Site::facility(b));
}

double MetricInstance::point_dist(PointId a, PointId b) const {
  return site_dist(Site::point(a), Site::point(b));
}

double MetricInstance::max_distance() const {
  double best = 0.0;
  for (PointId p = 0; p < n_; ++p)
    for (FacilityId x = 0; x < m_; ++x) best = std::max(best, dist(p, x));
  return best;
}

double MetricInstance::min_positive_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (PointId p = 0; p < n_; ++p)
    for (FacilityId x = 0; x < m_; ++x) {
      const double v = dist(p, x);
      if (v > 0.0) best = std::min(best, v);
    }
  return std::isinf(best) ? 0.0 : best;
}

std::vector<FacilityId> BallSolution::facilities() const {
  std::vector<FacilityId> out;
  out.reserve(radius.size());
  for (const auto& [x, r] : radius) out.push_back(x);
  return out;
}

std::vector<double> BallSolution::radii() const {
  std::vector<double> out;
  out.reserve(radius.size());
  for (const auto& [x, r] : radius) out.push_back(r);
  return out;
}

void BallSolution::open(FacilityId x, double r) {
  auto [it, inserted] = radius.emplace(x, r);
  if (!inserted) it->second = std::max(it->second, r);
}

double truncated_dist(const MetricInstance& m, PointId p, FacilityId x, double r) {
  return dotdiv(m.dist(p, x), r);
}

double dstar(const MetricInstance& m, Site a, Site b, double ra, double rb) {
  return dotdiv(dotdiv(m.site_dist(a, b), ra), rb);
}

double dstarstar(const MetricInstance& m, Site a, Site b, double ra, double rb,
                 double group_max) {
  return dstar(m, a, b, ra + 2.0 * group_max, rb);
}

std::string MetricViolation::describe() const {
  switch (kind) {
    case Kind::Negative:
      return "negative distance d(" + std::to_string(a) + "," + std::to_string(b) + ")";
    case Kind::Diagonal:
      return "nonzero diagonal at node " + std::to_string(a);
    case Kind::Asymmetric:
      return "asymmetric pair (" + std::to_string(a) + "," + std::to_string(b) + ")";
    case Kind::Triangle:
      return "triangle inequality fails for (" + std::to_string(a) + "," +
             std::to_string(b) + "," + std::to_string(c) + ")";
  }
  return "unknown violation";
}

std::optional<MetricViolation> validate_metric(const MetricInstance& m, double tol) {
  const std::size_t total = m.num_points() + m.num_facilities();
  const auto& d = m.matrix();
  auto at = [&](std::size_t i, std::size_t j) { return d[i * total + j]; };
  using K = MetricViolation::Kind;
  for (std::size_t i = 0; i < total; ++i) {
    if (std::abs(at(i, i)) > tol) return MetricViolation{K::Diagonal, i, i, i};
    for (std::size_t j = 0; j < total; ++j) {
      if (!(at(i, j) >= -tol)) return MetricViolation{K::Negative, i, j, 0};
      if (std::abs(at(i, j) - at(j, i)) > tol) return MetricViolation{K::Asymmetric, i, j, 0};
    }
  }
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j)
      for (std::size_t l = 0; l < total; ++l)
        if (at(i, l) > at(i, j) + at(j, l) + tol) return MetricViolation{K::Triangle, i, j, l};
  return std::nullopt;
}

}  // namespace nestnorm
