#include "nestnorm/msrdc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "nestnorm/dual_ascent.hpp"

namespace nestnorm {

namespace {

constexpr std::size_t kMaxBisections = 200;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<PointId> all_points(const MetricInstance& m) {
  std::vector<PointId> out(m.num_points());
  for (PointId p = 0; p < out.size(); ++p) out[p] = p;
  return out;
}

bool in_ball(const MetricInstance& m, PointId p, FacilityId x, double r) { return m.dist(p, x) <= r; }

}  // namespace

double msrdc_cost(const MsrdcInstance& inst, const CoverSolution& sol, double scale) {
  double s = 0.0;
  for (const auto& [x, r] : sol.radius) s += inst.h(r / scale);
  return s;
}

bool covers(const MetricInstance& m, const CoverSolution& sol, const std::vector<PointId>& pts) {
  for (PointId p : pts) {
    bool hit = false;
    for (const auto& [x, r] : sol.radius) {
      if (in_ball(m, p, x, r)) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

bool covers_all(const MetricInstance& m, const CoverSolution& sol) {
  return covers(m, sol, all_points(m));
}

std::vector<double> msrdc_radii(const MsrdcInstance& inst, FacilityId x,
                                const std::vector<PointId>& clients, double mu) {
  std::set<double> vals{0.0};
  for (PointId p : clients) {
    const double d = inst.m().dist(p, x);
    if (inst.h(d) <= mu) vals.insert(d);
  }
  return {vals.begin(), vals.end()};
}

std::optional<MsrdcLmpResult> lmp_msrdc(const MsrdcInstance& inst, double lambda, double mu,
                                        const std::vector<PointId>& clients) {
  const auto& m = inst.m();
  const std::size_t n = clients.size();
  std::vector<AscentBall> balls;
  for (FacilityId x = 0; x < m.num_facilities(); ++x) {
    for (double r : msrdc_radii(inst, x, clients, mu)) {
      AscentBall b;
      b.facility = x;
      b.radius = r;
      b.threshold = lambda + inst.h(r);
      b.offset.resize(n);
      for (std::size_t i = 0; i < n; ++i) b.offset[i] = in_ball(m, clients[i], x, r) ? 0.0 : kNever;
      balls.push_back(std::move(b));
    }
  }
  auto asc = run_dual_ascent(balls, n);
  if (!asc.all_frozen) return std::nullopt;

  MsrdcLmpResult out;
  out.alpha = std::move(asc.alpha);
  for (std::size_t b = 0; b < balls.size(); ++b) {
    if (!asc.tight[b]) continue;
    auto [it, inserted] = out.tight_radius.emplace(balls[b].facility, balls[b].radius);
    if (!inserted) it->second = std::max(it->second, balls[b].radius);
  }
  std::vector<std::pair<FacilityId, double>> order(out.tight_radius.begin(), out.tight_radius.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& c) { return a.second > c.second; });

  std::vector<bool> removed(order.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (removed[i]) continue;
    const auto [x, r] = order[i];
    out.solution.open(x, 3.0 * r);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (removed[j]) continue;
      for (PointId p : clients) {
        if (in_ball(m, p, x, r) && in_ball(m, p, order[j].first, order[j].second)) {
          removed[j] = true;
          out.witnesses.push_back({order[j].first, x, p});
          break;
        }
      }
    }
  }
  return out;
}

MsrdcSearch binary_search_msrdc(const MsrdcInstance& inst, double eps, double mu,
                                const std::vector<PointId>& clients, std::size_t slots) {
  const auto& m = inst.m();
  MsrdcSearch out;
  if (clients.empty()) {
    out.outcome = CoverSolution{};
    return out;
  }
  if (slots == 0) return out;

  auto probe = [&](double lambda) {
    ++out.probes;
    return lmp_msrdc(inst, lambda, mu, clients);
  };
  auto low = probe(0.0);
  if (!low) return out;
  if (low->solution.size() <= slots) {
    out.outcome = low->solution;
    return out;
  }

  // Upper bound on the optimum of the remaining instance: one ball around the
  // best facility, or `slots` balls of cost at most mu each.
  double upper = kInf;
  for (FacilityId x = 0; x < m.num_facilities(); ++x) {
    double reach = 0.0;
    for (PointId p : clients) reach = std::max(reach, m.dist(p, x));
    upper = std::min(upper, inst.h(reach));
  }
  if (std::isfinite(mu)) upper = std::min(upper, static_cast<double>(slots) * mu);
  const double lambda_hi = upper > 0.0 ? 2.0 * upper : 1.0;
  auto high = probe(lambda_hi);
  if (!high || high->solution.size() > slots) return out;
  if (high->solution.size() == slots) {
    out.outcome = high->solution;
    return out;
  }

  double h_min = kInf;
  for (PointId p : clients)
    for (FacilityId x = 0; x < m.num_facilities(); ++x) {
      const double v = inst.h(m.dist(p, x));
      if (v > 0.0) h_min = std::min(h_min, v);
    }
  const double gap = std::isfinite(h_min)
                         ? eps * h_min / static_cast<double>(m.num_facilities())
                         : lambda_hi * 1e-9;

  CoverSolution first = high->solution, second = low->solution;
  double lambda1 = lambda_hi, lambda2 = 0.0;
  for (std::size_t it = 0; it < kMaxBisections && lambda1 - lambda2 >= gap; ++it) {
    const double mid = 0.5 * (lambda1 + lambda2);
    if (mid <= lambda2 || mid >= lambda1) break;
    auto sol = probe(mid);
    if (!sol) return MsrdcSearch{};
    if (sol->solution.size() == slots) {
      out.outcome = sol->solution;
      return out;
    }
    if (sol->solution.size() < slots) {
      first = std::move(sol->solution);
      lambda1 = mid;
    } else {
      second = std::move(sol->solution);
      lambda2 = mid;
    }
  }
  MsrdcBiPoint bp;
  const double n1 = static_cast<double>(first.size()), n2 = static_cast<double>(second.size());
  bp.a = (n2 - static_cast<double>(slots)) / (n2 - n1);
  bp.b = (static_cast<double>(slots) - n1) / (n2 - n1);
  bp.first = std::move(first);
  bp.second = std::move(second);
  out.outcome = std::move(bp);
  return out;
}

CoverSolution round_bipoint_msrdc(const MsrdcInstance& inst, const MsrdcBiPoint& bp,
                                  const std::vector<PointId>& clients, std::size_t slots,
                                  MsrdcRoundingTrace* trace) {
  MsrdcRoundingTrace local;
  MsrdcRoundingTrace& tr = trace ? *trace : local;
  tr = MsrdcRoundingTrace{};
  const auto& m = inst.m();
  if (msrdc_cost(inst, bp.first, 3.0) <= msrdc_cost(inst, bp.second, 3.0)) {
    tr.shortcut = true;
    return bp.first;
  }
  const auto f1 = bp.first.facilities();
  const auto r1 = bp.first.radii();
  const auto f2 = bp.second.facilities();
  const auto r2 = bp.second.radii();
  const std::size_t n1 = f1.size(), n2 = f2.size();

  std::vector<std::vector<std::size_t>> group(n1);
  for (std::size_t j = 0; j < n2; ++j) {
    std::size_t pick = n1;
    for (std::size_t i = 0; i < n1; ++i) {
      bool shared = false;
      for (PointId p : clients) {
        if (in_ball(m, p, f1[i], r1[i]) && in_ball(m, p, f2[j], r2[j])) {
          shared = true;
          break;
        }
      }
      if (shared && (pick == n1 || m.facility_dist(f1[i], f2[j]) < m.facility_dist(f1[pick], f2[j])))
        pick = i;
    }
    if (pick == n1) {
      pick = 0;
      for (std::size_t i = 1; i < n1; ++i) {
        const double a = dstar(m, Site::facility(f1[i]), Site::facility(f2[j]), r1[i], r2[j]);
        const double b = dstar(m, Site::facility(f1[pick]), Site::facility(f2[j]), r1[pick], r2[j]);
        if (a < b || (a == b && m.facility_dist(f1[i], f2[j]) < m.facility_dist(f1[pick], f2[j])))
          pick = i;
      }
    }
    group[pick].push_back(j);
  }

  std::vector<double> grown(n1, 0.0);
  std::vector<KnapsackItem> items;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < n1; ++i) {
    if (group[i].empty()) continue;
    double max_r = 0.0, opened = 0.0;
    for (std::size_t j : group[i]) {
      max_r = std::max(max_r, r2[j]);
      opened += inst.h(r2[j] / 9.0);
    }
    grown[i] = r1[i] + 2.0 * max_r;
    owner.push_back(i);
    items.push_back({inst.h(grown[i] / 9.0) - opened, static_cast<double>(group[i].size()) - 1.0});
  }
  const double budget = static_cast<double>(slots) - static_cast<double>(owner.size());
  tr.knapsack = solve_knapsack_lp(items, budget);

  CoverSolution out;
  for (std::size_t item = 0; item < owner.size(); ++item) {
    const std::size_t i = owner[item];
    const double u = tr.knapsack.u[item];
    if (u >= 1.0) {
      for (std::size_t j : group[i]) out.open(f2[j], r2[j]);
    } else {
      // Rounded down, including the single fractional group.
      out.open(f1[i], grown[i]);
      if (u > 0.0) tr.special = f1[i];
    }
  }
  if (!covers(m, out, clients)) throw std::logic_error("bi-point rounding lost coverage");
  return out;
}

std::size_t msrdc_guess_size(const MsrdcInstance& inst, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const auto t = static_cast<std::size_t>(std::ceil(1.0 / eps - 1e-12));
  return std::min({t, inst.k, inst.m().num_facilities()});
}

MsrdcResult solve_msrdc(const MsrdcInstance& inst, double eps, const MsrdcOptions& opts) {
  const auto& m = inst.m();
  if (m.num_facilities() == 0) throw std::invalid_argument("instance has no facilities");
  if (inst.k == 0) throw std::invalid_argument("k must be at least 1");
  std::size_t top = msrdc_guess_size(inst, eps);
  if (opts.max_guess_size) top = std::min(top, *opts.max_guess_size);

  MsrdcResult best;
  best.scaled_cost = kInf;
  double upper = kInf;  // cheapest cover seen, an upper bound on the optimum
  bool found = false;
  auto consider = [&](CoverSolution sol) {
    if (sol.size() > inst.k) throw std::logic_error("cover uses more than k balls");
    const double scaled = msrdc_cost(inst, sol, 9.0);
    const double plain = msrdc_cost(inst, sol);
    upper = std::min(upper, plain);
    if (!found || scaled < best.scaled_cost || (scaled == best.scaled_cost && plain < best.cost)) {
      found = true;
      best.scaled_cost = scaled;
      best.cost = plain;
      best.solution = std::move(sol);
    }
  };

  for (std::size_t size = 0; size <= top; ++size) {
    for_each_guess(m, size, [&](const Guess& g) {
      double guessed_cost = 0.0, radius_min = kInf;
      for (const auto& [x, r] : g.radius) {
        guessed_cost += inst.h(r);
        radius_min = std::min(radius_min, r);
      }
      if (guessed_cost > upper) return true;
      ++best.guesses_tried;
      CoverSolution fixed;
      for (const auto& [x, r] : g.radius) fixed.open(x, r);
      std::vector<PointId> rest;
      for (PointId p = 0; p < m.num_points(); ++p)
        if (!covers(m, fixed, {p})) rest.push_back(p);
      if (rest.empty()) {
        consider(fixed);
        return true;
      }
      const std::size_t slots = inst.k - g.radius.size();
      if (slots == 0) return true;
      const double mu = g.radius.empty() ? kInf : inst.h(radius_min);
      auto search = binary_search_msrdc(inst, eps, mu, rest, slots);
      CoverSolution part;
      if (auto* exact = std::get_if<CoverSolution>(&search.outcome)) {
        part = std::move(*exact);
      } else if (auto* bp = std::get_if<MsrdcBiPoint>(&search.outcome)) {
        part = round_bipoint_msrdc(inst, *bp, rest, slots);
      } else {
        return true;
      }
      for (const auto& [x, r] : part.radius) fixed.open(x, r);
      if (fixed.size() > inst.k) return true;  // a guessed facility was reused
      consider(std::move(fixed));
      return true;
    });
  }
  if (!found) throw std::runtime_error("no feasible cover found");
  return best;
}

std::vector<double> threshold_candidates(const MetricInstance& m, double eps) {
  std::set<double> vals{0.0};
  for (PointId p = 0; p < m.num_points(); ++p)
    for (FacilityId x = 0; x < m.num_facilities(); ++x) vals.insert(round_down_power(m.dist(p, x), eps));
  return {vals.begin(), vals.end()};
}

LinfOrdResult solve_linf_ord(const MetricInstance& m, std::size_t k, std::span<const double> w,
                             double eps, const LinfOrdOptions& opts) {
  check_weights(w);
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const std::size_t len = std::max(w.size(), k);
  std::vector<double> weights(w.begin(), w.end());
  weights.resize(len, 0.0);
  const auto sparse = sparsify_weights(weights, eps);
  const auto cands = threshold_candidates(m, eps);
  const auto thresholds = enumerate_thresholds(sparse, cands, opts.threshold_cap);

  LinfOrdResult best;
  best.value = kInf;
  for (const auto& t : thresholds) {
    MsrdcInstance sub{&m, k, ThresholdCost::from_weights(sparse, t)};
    auto res = solve_msrdc(sub, eps, opts.msrdc);
    ++best.thresholds_tried;
    auto radii = res.solution.radii();
    const double value = ordered_norm_padded(weights, radii);
    if (value < best.value) {
      best.value = value;
      best.solution = std::move(res.solution);
      best.thresholds = t;
    }
  }
  best.weights = sparse;
  auto radii = best.solution.radii();
  radii.resize(len, 0.0);
  std::vector<double> scaled(best.thresholds.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = 9.0 * best.thresholds[i];
  best.proxy_bound = proxy_ordered(radii, sparse, scaled);
  return best;
}

}  // namespace nestnorm
