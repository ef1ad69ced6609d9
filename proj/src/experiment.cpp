#include "nestnorm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace nestnorm {

namespace {

double round6(double v) { return std::round(v * 1e6) / 1e6; }

// Box-Muller on top of mt19937_64 so the output does not depend on the
// standard library's distribution implementation.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

GeneratedInstance generate(const GeneratorSpec& spec) {
  if (spec.clusters.empty()) throw std::invalid_argument("generator needs at least one cluster");
  Gaussian g(spec.seed);
  std::vector<Point2> pts;
  GeneratedInstance out;
  for (std::size_t c = 0; c < spec.clusters.size(); ++c) {
    const auto& cl = spec.clusters[c];
    if (cl.count == 0 || !(cl.stddev > 0.0))
      throw std::invalid_argument("clusters need a positive count and stddev");
    for (std::size_t i = 0; i < cl.count; ++i) {
      const double x = cl.center.x + cl.stddev * g.next();
      const double y = cl.center.y + cl.stddev * g.next();
      pts.push_back({round6(x), round6(y)});
      out.labels.push_back(static_cast<int>(c));
    }
  }
  std::vector<Point2> fac;
  if (spec.facility_mode == GeneratorSpec::FacilityMode::OnPoints) {
    fac = pts;
  } else {
    if (!(spec.grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
    double x0 = pts[0].x, x1 = x0, y0 = pts[0].y, y1 = y0;
    for (const auto& p : pts) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    const double s = spec.grid_step;
    for (double x = std::floor(x0 / s) * s; x <= x1 + s / 2; x += s)
      for (double y = std::floor(y0 / s) * s; y <= y1 + s / 2; y += s) fac.push_back({round6(x), round6(y)});
  }
  out.metric = MetricInstance::planar(std::move(pts), std::move(fac));
  return out;
}

double recovery_score(const AssignmentSolution& sol, const std::vector<int>& labels) {
  if (sol.assign.size() != labels.size())
    throw std::invalid_argument("recovery_score: assignment and labels differ in length");
  if (labels.empty()) return 1.0;
  std::map<FacilityId, std::size_t> cluster_of;
  for (FacilityId x : sol.assign) cluster_of.emplace(x, cluster_of.size());
  std::map<int, std::size_t> label_of;
  for (int l : labels) label_of.emplace(l, label_of.size());
  const std::size_t groups = std::max(cluster_of.size(), label_of.size());
  if (groups > 8) throw std::invalid_argument("recovery_score handles at most 8 groups");
  std::vector<std::vector<std::size_t>> overlap(groups, std::vector<std::size_t>(groups, 0));
  for (std::size_t p = 0; p < labels.size(); ++p)
    ++overlap[cluster_of[sol.assign[p]]][label_of[labels[p]]];
  std::vector<std::size_t> perm(groups);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hit = 0;
    for (std::size_t c = 0; c < groups; ++c) hit += overlap[c][perm[c]];
    best = std::max(best, hit);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(labels.size());
}

std::string render_svg(const MetricInstance& m, const AssignmentSolution* sol,
                       const BallSolution* balls, const std::string& title) {
  if (!m.has_coordinates()) throw std::invalid_argument("plot needs a planar instance");
  const auto& pts = m.point_coords();
  const auto& fac = m.facility_coords();
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  auto grow = [&](double x, double y, double r) {
    x0 = std::min(x0, x - r);
    x1 = std::max(x1, x + r);
    y0 = std::min(y0, y - r);
    y1 = std::max(y1, y + r);
  };
  for (const auto& p : pts) grow(p.x, p.y, 0.0);
  if (balls)
    for (const auto& [x, r] : balls->radius) grow(fac[x].x, fac[x].y, r);
  if (x0 > x1) x0 = y0 = 0.0, x1 = y1 = 1.0;
  const double span = std::max({x1 - x0, y1 - y0, 1e-9});
  const double size = 600.0, pad = 20.0;
  const double scale = (size - 2 * pad) / span;
  auto sx = [&](double x) { return pad + (x - x0) * scale; };
  auto sy = [&](double y) { return size - pad - (y - y0) * scale; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  std::map<FacilityId, std::size_t> color;
  if (sol)
    for (FacilityId x : sol->centers) color.emplace(x, color.size());

  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  if (!title.empty()) os << "  <title>" << title << "</title>\n";
  os << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (balls) {
    os << "  <g id=\"balls\" fill=\"none\" stroke-width=\"1.5\">\n";
    for (const auto& [x, r] : balls->radius) {
      const char* c = palette[(color.count(x) ? color[x] : 0) % 8];
      os << "    <circle class=\"ball\" cx=\"" << sx(fac[x].x) << "\" cy=\"" << sy(fac[x].y)
         << "\" r=\"" << r * scale << "\" stroke=\"" << c << "\"/>\n";
    }
    os << "  </g>\n";
  }
  os << "  <g id=\"points\">\n";
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const char* c = "#555555";
    if (sol && p < sol->assign.size() && color.count(sol->assign[p])) c = palette[color[sol->assign[p]] % 8];
    os << "    <circle class=\"point\" cx=\"" << sx(pts[p].x) << "\" cy=\"" << sy(pts[p].y)
       << "\" r=\"3\" fill=\"" << c << "\"/>\n";
  }
  os << "  </g>\n";
  if (sol && !sol->centers.empty()) {
    os << "  <g id=\"centers\">\n";
    for (FacilityId x : sol->centers) {
      os << "    <rect class=\"center\" x=\"" << sx(fac[x].x) - 4 << "\" y=\"" << sy(fac[x].y) - 4
         << "\" width=\"8\" height=\"8\" fill=\"black\"/>\n";
    }
    os << "  </g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace nestnorm
