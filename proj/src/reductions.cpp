#include "nestnorm/reductions.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "nestnorm/msrdc.hpp"
#include "nestnorm/norms.hpp"

namespace nestnorm {

namespace {

using Kind = NormSpec::Kind;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty weight list");
  return out;
}

double weight_sum(const std::vector<double>& w) { return std::accumulate(w.begin(), w.end(), 0.0); }

// Weights of an L1/Linf/Topl/Ord norm on vectors of length len.
std::vector<double> as_weights(const NormSpec& norm, std::size_t len) {
  std::vector<double> w;
  switch (norm.kind) {
    case Kind::L1:
      w.assign(len, 1.0);
      break;
    case Kind::Linf:
      w.assign(len, 0.0);
      if (len > 0) w[0] = 1.0;
      break;
    case Kind::Topl:
      w.assign(len, 0.0);
      for (std::size_t i = 0; i < std::min(norm.ell, len); ++i) w[i] = 1.0;
      break;
    case Kind::Ord:
      w = norm.w;
      w.resize(std::max(len, w.size()), 0.0);
      break;
    case Kind::SymMaxOrd:
      throw std::logic_error("max-of-ordered norms have no single weight vector");
  }
  return w;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Approximation finish(const MetricInstance& m, std::size_t k, const NormSpec& inner,
                     const NormSpec& outer, Approximation a) {
  a.cost = nested_cost(m, k, inner, outer, a.solution);
  return a;
}

}  // namespace

NormSpec NormSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  NormSpec out;
  if (head == "l1") {
    out = l1();
  } else if (head == "linf") {
    out = linf();
  } else if (head == "topl") {
    std::size_t used = 0;
    const long v = rest.empty() ? 0 : std::stol(rest, &used);
    if (rest.empty() || used != rest.size() || v < 1)
      throw std::invalid_argument("topl needs a positive integer, as in topl:8");
    out = topl(static_cast<std::size_t>(v));
  } else if (head == "ord") {
    out = ord(parse_list(rest));
  } else if (head == "sym") {
    std::vector<std::vector<double>> ws;
    std::stringstream ss(rest);
    std::string part;
    while (std::getline(ss, part, ';')) ws.push_back(parse_list(part));
    out = sym_max_ord(std::move(ws));
  } else {
    throw std::invalid_argument("unknown norm '" + text + "' (expected l1, linf, topl:L, ord:w, sym:w;w)");
  }
  out.validate();
  return out;
}

void NormSpec::validate() const {
  switch (kind) {
    case Kind::Topl:
      if (ell == 0) throw std::invalid_argument("topl needs ell >= 1");
      break;
    case Kind::Ord:
      check_weights(w);
      break;
    case Kind::SymMaxOrd:
      if (ws.empty())
        throw std::invalid_argument("symmetric norms are only supported as a max of ordered norms");
      for (const auto& v : ws) check_weights(v);
      break;
    default:
      break;
  }
}

std::string NormSpec::describe() const {
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
    return s;
  };
  switch (kind) {
    case Kind::L1: return "l1";
    case Kind::Linf: return "linf";
    case Kind::Topl: return "topl:" + std::to_string(ell);
    case Kind::Ord: return "ord:" + list(w);
    case Kind::SymMaxOrd: {
      std::string s = "sym:";
      for (std::size_t i = 0; i < ws.size(); ++i) s += (i ? ";" : "") + list(ws[i]);
      return s;
    }
  }
  return "?";
}

double evaluate_norm(const NormSpec& norm, std::span<const double> x) {
  switch (norm.kind) {
    case Kind::L1:
      return std::accumulate(x.begin(), x.end(), 0.0);
    case Kind::Linf:
      return x.empty() ? 0.0 : *std::max_element(x.begin(), x.end());
    case Kind::Topl:
      return x.empty() ? 0.0 : top_ell(x, std::min(norm.ell, x.size()));
    case Kind::Ord:
      return ordered_norm_padded(norm.w, x);
    case Kind::SymMaxOrd: {
      double best = 0.0;
      for (const auto& w : norm.ws) best = std::max(best, ordered_norm_padded(w, x));
      return best;
    }
  }
  return 0.0;
}

double nested_cost(const MetricInstance& m, std::size_t k, const NormSpec& inner,
                   const NormSpec& outer, const AssignmentSolution& sol) {
  std::vector<double> per_center(std::max(k, sol.centers.size()), 0.0);
  std::vector<double> cluster(m.num_points());
  for (std::size_t i = 0; i < sol.centers.size(); ++i) {
    const FacilityId x = sol.centers[i];
    for (PointId p = 0; p < m.num_points(); ++p) cluster[p] = sol.assign.at(p) == x ? m.dist(p, x) : 0.0;
    per_center[i] = evaluate_norm(inner, cluster);
  }
  return evaluate_norm(outer, per_center);
}

AssignmentSolution assign_to_cover(const MetricInstance& m, const BallSolution& cover) {
  AssignmentSolution out;
  out.centers = cover.facilities();
  out.assign.resize(m.num_points());
  for (PointId p = 0; p < m.num_points(); ++p) {
    bool found = false;
    double best = 0.0;
    for (const auto& [x, r] : cover.radius) {
      const double d = m.dist(p, x);
      if (d <= r && (!found || d < best)) {
        found = true;
        best = d;
        out.assign[p] = x;
      }
    }
    if (!found) throw std::invalid_argument("cover leaves point " + std::to_string(p) + " uncovered");
  }
  return out;
}

Approximation reduce_inner_ord_to_l1(const MetricInstance& m, std::size_t k,
                                     const std::vector<double>& w, const NormSpec& outer,
                                     const NestedSolver& l1_solver) {
  check_weights(w);
  auto a = l1_solver.run(m, k);
  const double n = static_cast<double>(m.num_points());
  a.factor *= w[0] * n / weight_sum(as_weights(NormSpec::ord(w), m.num_points()));
  a.route = "inner ord via L1 (" + l1_solver.name + ")";
  return finish(m, k, NormSpec::ord(w), outer, std::move(a));
}

Approximation reduce_inner_ord_to_linf(const MetricInstance& m, std::size_t k,
                                       const std::vector<double>& w, const NormSpec& outer,
                                       const NestedSolver& linf_solver) {
  check_weights(w);
  auto a = linf_solver.run(m, k);
  a.factor *= weight_sum(as_weights(NormSpec::ord(w), m.num_points())) / w[0];
  a.route = "inner ord via Linf (" + linf_solver.name + ")";
  return finish(m, k, NormSpec::ord(w), outer, std::move(a));
}

Approximation best_of_pair(const MetricInstance& m, std::size_t k, const std::vector<double>& w,
                           const NormSpec& outer, const NestedSolver& l1_solver,
                           const NestedSolver& linf_solver) {
  auto via_l1 = reduce_inner_ord_to_l1(m, k, w, outer, l1_solver);
  auto via_linf = reduce_inner_ord_to_linf(m, k, w, outer, linf_solver);
  const double factor = std::min(via_l1.factor, via_linf.factor);
  Approximation out = via_linf.cost < via_l1.cost ? std::move(via_linf) : std::move(via_l1);
  out.factor = factor;
  out.route = "best of pair, kept " + out.route;
  return out;
}

Approximation reduce_outer_ord_to_l1(const MetricInstance& m, std::size_t k,
                                     const NormSpec& inner, const std::vector<double>& w,
                                     const NestedSolver& l1_solver) {
  check_weights(w);
  auto a = l1_solver.run(m, k);
  const auto wk = as_weights(NormSpec::ord(w), k);
  a.factor *= w[0] * static_cast<double>(k) / weight_sum(wk);
  a.route = "outer ord via L1 (" + l1_solver.name + ")";
  return finish(m, k, inner, NormSpec::ord(w), std::move(a));
}

Approximation reduce_outer_ord_to_linf(const MetricInstance& m, std::size_t k,
                                       const NormSpec& inner, const std::vector<double>& w,
                                       const NestedSolver& linf_solver) {
  check_weights(w);
  auto a = linf_solver.run(m, k);
  a.factor *= weight_sum(as_weights(NormSpec::ord(w), k)) / w[0];
  a.route = "outer ord via Linf (" + linf_solver.name + ")";
  return finish(m, k, inner, NormSpec::ord(w), std::move(a));
}

std::vector<double> averaged_weights(const std::vector<std::vector<double>>& ws) {
  if (ws.empty()) throw std::invalid_argument("no weight vectors");
  std::size_t len = 0;
  for (const auto& w : ws) len = std::max(len, w.size());
  std::vector<double> avg(len, 0.0);
  for (const auto& w : ws)
    for (std::size_t i = 0; i < w.size(); ++i) avg[i] += w[i] / static_cast<double>(ws.size());
  return avg;
}

namespace {

struct Router {
  const MetricInstance& m;
  std::size_t k;
  double eps;
  DispatchOptions opts;

  NestedSolver ball_solver(std::size_t ell) const {
    return {[this, ell](const MetricInstance& mm, std::size_t kk) {
              BallKMedianInstance inst{&mm, kk, static_cast<double>(ell)};
              BallKMedianOptions o;
              o.max_guess_size = opts.max_guess_size;
              auto res = solve_ball_kmedian(inst, eps, o);
              Approximation a;
              a.balls = res.solution;
              a.solution = lift_ball_solution(mm, res.solution);
              a.factor = 13.5 + 7.5 * eps;
              a.guesses_tried = res.guesses_tried;
              a.lambda_final = res.lambda_final;
              a.route = "ball k-median (rho=" + std::to_string(ell) + ")";
              return a;
            },
            "ball k-median rho=" + std::to_string(ell)};
  }

  NestedSolver cover_solver(std::vector<double> w) const {
    return {[this, w](const MetricInstance& mm, std::size_t kk) {
              LinfOrdOptions o;
              o.msrdc.max_guess_size = opts.max_guess_size;
              auto res = solve_linf_ord(mm, kk, w, eps, o);
              Approximation a;
              a.balls = res.solution;
              a.solution = assign_to_cover(mm, res.solution);
              a.factor = 18.0 + eps;
              a.ord_value = res.value;
              a.route = "linf/ord cover";
              return a;
            },
            "linf/ord cover"};
  }

  NestedSolver wrap(NormSpec inner, NormSpec outer) const {
    return {[this, inner, outer](const MetricInstance&, std::size_t) { return solve(inner, outer); },
            inner.describe() + "/" + outer.describe()};
  }

  Approximation solve(const NormSpec& inner, const NormSpec& outer) const {
    const std::size_t n = m.num_points();
    if (inner.kind == Kind::SymMaxOrd) {
      auto a = solve(NormSpec::ord(averaged_weights(inner.ws)), outer);
      a.factor *= static_cast<double>(inner.ws.size());
      a.route = "max-of-ord inner via averaged weights, " + a.route;
      return finish(m, k, inner, outer, std::move(a));
    }
    if (outer.kind == Kind::SymMaxOrd) {
      auto a = solve(inner, NormSpec::ord(averaged_weights(outer.ws)));
      a.factor *= static_cast<double>(outer.ws.size());
      a.route = "max-of-ord outer via averaged weights, " + a.route;
      return finish(m, k, inner, outer, std::move(a));
    }
    if (outer.kind == Kind::L1 && inner.kind != Kind::Ord) {
      const std::size_t ell = inner.kind == Kind::L1     ? n
                              : inner.kind == Kind::Linf ? 1
                                                         : std::min(inner.ell, n);
      return finish(m, k, inner, outer, ball_solver(ell).run(m, k));
    }
    if (inner.kind == Kind::Linf) {
      return finish(m, k, inner, outer, cover_solver(as_weights(outer, k)).run(m, k));
    }
    if (inner.kind == Kind::Ord || inner.kind == Kind::Topl) {
      return best_of_pair(m, k, as_weights(inner, n), outer, wrap(NormSpec::l1(), outer),
                          wrap(NormSpec::linf(), outer));
    }
    // Inner L1 with a non-L1 outer norm: only the k-median wrapper applies.
    auto a = reduce_outer_ord_to_l1(m, k, inner, as_weights(outer, k),
                                    wrap(NormSpec::l1(), NormSpec::l1()));
    a.route = "factor O(k) via k-Median wrapper: " + a.route;
    return finish(m, k, inner, outer, std::move(a));
  }
};

}  // namespace

Approximation dispatch(const MetricInstance& m, std::size_t k, const NormSpec& inner,
                       const NormSpec& outer, double eps, const DispatchOptions& opts) {
  inner.validate();
  outer.validate();
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  Router r{m, k, eps, opts};
  return r.solve(inner, outer);
}

}  // namespace nestnorm
