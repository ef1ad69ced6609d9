#include "nestnorm/ball_kmedian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "nestnorm/norms.hpp"

namespace nestnorm {

namespace {

constexpr std::size_t kMaxBisections = 200;

double beta_tol(const MetricInstance& m) { return 1e-12 * (1.0 + m.max_distance()); }

std::vector<double> cluster_vector(const MetricInstance& m, const AssignmentSolution& sol,
                                   FacilityId x) {
  std::vector<double> v(m.num_points(), 0.0);
  for (PointId p = 0; p < m.num_points(); ++p)
    if (sol.assign.at(p) == x) v[p] = m.dist(p, x);
  return v;
}

double min_truncated(const MetricInstance& m, PointId p, const BallSolution& sol) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [x, r] : sol.radius) best = std::min(best, truncated_dist(m, p, x, r));
  return best;
}

}  // namespace

double ball_kmedian_cost(const BallKMedianInstance& inst, const BallSolution& sol) {
  if (sol.empty()) throw std::invalid_argument("ball solution has no facilities");
  const auto& m = inst.m();
  double cost = 0.0;
  for (PointId p = 0; p < m.num_points(); ++p) cost += min_truncated(m, p, sol);
  for (const auto& [x, r] : sol.radius) cost += inst.rho * r;
  return cost;
}

BallSolution reduce_topl_solution(const MetricInstance& m, const AssignmentSolution& sol,
                                  std::size_t ell) {
  if (ell == 0 || ell > m.num_points())
    throw std::invalid_argument("reduce_topl_solution: ell out of range");
  BallSolution out;
  for (FacilityId x : sol.centers) {
    auto v = cluster_vector(m, sol, x);
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(ell - 1), v.end(),
                     std::greater<>());
    out.open(x, v[ell - 1]);
  }
  return out;
}

AssignmentSolution lift_ball_solution(const MetricInstance& m, const BallSolution& sol) {
  if (sol.empty()) throw std::invalid_argument("ball solution has no facilities");
  AssignmentSolution out;
  out.centers = sol.facilities();
  out.assign.resize(m.num_points());
  for (PointId p = 0; p < m.num_points(); ++p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [x, r] : sol.radius) {  // ascending id: strict < keeps the smallest
      const double v = truncated_dist(m, p, x, r);
      if (v < best) {
        best = v;
        out.assign[p] = x;
      }
    }
  }
  return out;
}

double topl_l1_cost(const MetricInstance& m, const AssignmentSolution& sol, std::size_t ell) {
  double cost = 0.0;
  for (FacilityId x : sol.centers) cost += top_ell(cluster_vector(m, sol, x), ell);
  return cost;
}

std::size_t ball_guess_size(const BallKMedianInstance& inst, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const auto t = static_cast<std::size_t>(std::ceil(3.0 / eps - 1e-12));
  return std::min({t, inst.k, inst.m().num_facilities()});
}

std::vector<double> guess_radii(const MetricInstance& m, FacilityId x) {
  std::set<double> vals{0.0};
  for (PointId p = 0; p < m.num_points(); ++p) vals.insert(m.dist(p, x));
  return {vals.begin(), vals.end()};
}

void for_each_guess(const MetricInstance& m, std::size_t size,
                    const std::function<bool(const Guess&)>& visit) {
  const std::size_t nf = m.num_facilities();
  if (size > nf) return;
  std::vector<std::vector<double>> radii(nf);
  for (FacilityId x = 0; x < nf; ++x) radii[x] = guess_radii(m, x);

  std::vector<FacilityId> subset(size);
  std::iota(subset.begin(), subset.end(), 0);
  while (true) {
    std::vector<std::size_t> pick(size, 0);
    while (true) {
      Guess g;
      for (std::size_t i = 0; i < size; ++i) g.radius[subset[i]] = radii[subset[i]][pick[i]];
      if (!visit(g)) return;
      std::size_t i = 0;
      for (; i < size; ++i) {
        if (++pick[i] < radii[subset[i]].size()) break;
        pick[i] = 0;
      }
      if (i == size) break;
    }
    // Next subset in lexicographic order.
    std::size_t i = size;
    while (i > 0 && subset[i - 1] == nf - size + i - 1) --i;
    if (i == 0) return;
    ++subset[i - 1];
    for (std::size_t j = i; j < size; ++j) subset[j] = subset[j - 1] + 1;
  }
}

std::vector<Guess> enumerate_guesses(const BallKMedianInstance& inst, double eps) {
  std::vector<Guess> out;
  for_each_guess(inst.m(), ball_guess_size(inst, eps), [&](const Guess& g) {
    out.push_back(g);
    return true;
  });
  return out;
}

std::vector<double> allowed_radii(const MetricInstance& m, FacilityId x, const Guess& guess) {
  double cap = std::numeric_limits<double>::infinity();
  for (const auto& [y, r] : guess.radius) cap = std::min(cap, r);
  std::set<double> vals{0.0};
  for (PointId p = 0; p < m.num_points(); ++p) {
    const double d = m.dist(p, x);
    if (d <= cap) vals.insert(d);
  }
  return {vals.begin(), vals.end()};
}

LmpResult lmp_primal_dual(const BallKMedianInstance& inst, double lambda, const Guess& guess) {
  const auto& m = inst.m();
  const std::size_t n = m.num_points();
  LmpResult out;
  auto& dual = out.dual;
  for (FacilityId x = 0; x < m.num_facilities(); ++x) {
    auto it = guess.radius.find(x);
    const bool guessed = it != guess.radius.end();
    const std::vector<double> rs = guessed ? std::vector<double>{it->second}
                                           : allowed_radii(m, x, guess);
    for (double r : rs) {
      AscentBall b;
      b.facility = x;
      b.radius = r;
      b.fixed = guessed;
      b.threshold = guessed ? 0.0 : lambda + inst.rho * r;
      b.offset.resize(n);
      for (PointId p = 0; p < n; ++p) b.offset[p] = truncated_dist(m, p, x, r);
      dual.balls.push_back(std::move(b));
    }
  }
  auto asc = run_dual_ascent(dual.balls, n);
  if (!asc.all_frozen) throw std::logic_error("dual ascent ended with active clients");
  dual.alpha = std::move(asc.alpha);
  dual.tight = std::move(asc.tight);

  std::map<FacilityId, std::size_t> best_ball;
  for (std::size_t b = 0; b < dual.balls.size(); ++b) {
    const auto& ball = dual.balls[b];
    if (ball.fixed || !dual.tight[b]) continue;
    auto it = best_ball.find(ball.facility);
    if (it == best_ball.end() || dual.balls[it->second].radius < ball.radius)
      best_ball[ball.facility] = b;
  }
  for (const auto& [x, b] : best_ball) dual.tight_radius[x] = dual.balls[b].radius;

  std::vector<std::pair<FacilityId, std::size_t>> order(best_ball.begin(), best_ball.end());
  std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& c) {
    return dual.balls[a.second].radius > dual.balls[c.second].radius;
  });
  const double tol = beta_tol(m);
  std::vector<std::vector<PointId>> payers(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    for (PointId p = 0; p < n; ++p)
      if (dual.beta(order[i].second, p) > tol) payers[i].push_back(p);

  std::vector<bool> removed(order.size(), false);
  std::vector<bool> claimed(n, false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (removed[i]) continue;
    dual.selected.push_back(order[i].first);
    dual.tight_ball.push_back(order[i].second);
    dual.contributors.push_back(payers[i]);
    for (PointId p : payers[i]) claimed[p] = true;
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (removed[j]) continue;
      for (PointId p : payers[j]) {
        if (claimed[p]) {
          removed[j] = true;
          break;
        }
      }
    }
  }

  for (const auto& [x, r] : guess.radius) out.solution.open(x, r);
  for (std::size_t i = 0; i < dual.selected.size(); ++i)
    out.solution.open(dual.selected[i], 3.0 * dual.balls[dual.tight_ball[i]].radius);
  return out;
}

double dual_violation(const BallKMedianInstance& inst, double lambda, const Guess& guess,
                      const DualState& dual) {
  const auto& m = inst.m();
  double worst = -std::numeric_limits<double>::infinity();
  for (PointId p = 0; p < m.num_points(); ++p) worst = std::max(worst, -dual.alpha.at(p));
  for (FacilityId x = 0; x < m.num_facilities(); ++x) {
    auto it = guess.radius.find(x);
    const bool guessed = it != guess.radius.end();
    const std::vector<double> rs = guessed ? std::vector<double>{it->second}
                                           : allowed_radii(m, x, guess);
    for (double r : rs) {
      double paid = 0.0;
      for (PointId p = 0; p < m.num_points(); ++p) paid += dotdiv(dual.alpha[p], truncated_dist(m, p, x, r));
      const double cap = guessed ? 0.0 : lambda + inst.rho * r;
      worst = std::max(worst, paid - cap);
    }
  }
  return worst;
}

double contributing_identity_gap(const BallKMedianInstance& inst, double lambda,
                                 const Guess& guess, const LmpResult& lmp) {
  (void)guess;
  const auto& m = inst.m();
  const auto& dual = lmp.dual;
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < dual.selected.size(); ++i) {
    const auto& ball = dual.balls[dual.tight_ball[i]];
    lhs += inst.rho * ball.radius + lambda;
    for (PointId p : dual.contributors[i]) {
      lhs += truncated_dist(m, p, ball.facility, ball.radius);
      rhs += dual.alpha[p];
    }
  }
  return lhs - rhs;
}

double noncontributing_excess(const BallKMedianInstance& inst, const LmpResult& lmp) {
  const auto& m = inst.m();
  std::vector<bool> contributes(m.num_points(), false);
  for (const auto& ps : lmp.dual.contributors)
    for (PointId p : ps) contributes[p] = true;
  double worst = -std::numeric_limits<double>::infinity();
  for (PointId p = 0; p < m.num_points(); ++p) {
    if (contributes[p]) continue;
    worst = std::max(worst, min_truncated(m, p, lmp.solution) - 3.0 * lmp.dual.alpha[p]);
  }
  return worst;
}

BipointSearch binary_search_bipoint(const BallKMedianInstance& inst, double eps,
                                    const Guess& guess) {
  const auto& m = inst.m();
  const std::size_t k = inst.k;
  BipointSearch out;
  if (guess.radius.size() >= k) {
    // The guess already fills every slot.
    BallSolution sol;
    for (const auto& [x, r] : guess.radius) sol.open(x, r);
    out.outcome = sol;
    return out;
  }
  const double dmax = m.max_distance();
  if (dmax == 0.0) {
    BallSolution sol;
    for (const auto& [x, r] : guess.radius) sol.open(x, r);
    for (FacilityId x = 0; x < m.num_facilities() && sol.size() < std::max<std::size_t>(k, 1); ++x)
      sol.open(x, 0.0);
    out.outcome = sol;
    return out;
  }

  auto probe = [&](double lambda) {
    ++out.probes;
    out.lambda = lambda;
    return lmp_primal_dual(inst, lambda, guess).solution;
  };

  BallSolution low = probe(0.0);
  if (low.size() <= k) {
    out.outcome = low;
    return out;
  }
  double lambda_hi = static_cast<double>(m.num_points()) * dmax;
  BallSolution high = probe(lambda_hi);
  if (high.size() == k) {
    out.outcome = high;
    return out;
  }
  if (high.size() > k) {
    // Keep only the guessed balls, or a single ball when there is no guess.
    BallSolution kept;
    if (!guess.radius.empty()) {
      for (const auto& [x, r] : guess.radius) kept.open(x, r);
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [x, r] : high.radius) {
        BallSolution one;
        one.open(x, r);
        const double c = ball_kmedian_cost(inst, one);
        if (c < best) {
          best = c;
          kept = one;
        }
      }
    }
    high = kept;
  }

  double lambda1 = lambda_hi, lambda2 = 0.0;
  const double gap = eps * m.min_positive_distance() /
                     (3.0 * static_cast<double>(m.num_facilities()));
  for (std::size_t it = 0; it < kMaxBisections && lambda1 - lambda2 >= gap; ++it) {
    const double mid = 0.5 * (lambda1 + lambda2);
    if (mid <= lambda2 || mid >= lambda1) break;
    BallSolution sol = probe(mid);
    if (sol.size() == k) {
      out.outcome = sol;
      return out;
    }
    if (sol.size() < k) {
      high = std::move(sol);
      lambda1 = mid;
    } else {
      low = std::move(sol);
      lambda2 = mid;
    }
  }

  BiPointSolution bp;
  const double n1 = static_cast<double>(high.size());
  const double n2 = static_cast<double>(low.size());
  bp.a = (n2 - static_cast<double>(k)) / (n2 - n1);
  bp.b = (static_cast<double>(k) - n1) / (n2 - n1);
  bp.first = std::move(high);
  bp.second = std::move(low);
  bp.lambda_first = lambda1;
  bp.lambda_second = lambda2;
  out.lambda = lambda1;
  out.outcome = std::move(bp);
  return out;
}

GroupStructure build_groups(const BallKMedianInstance& inst, const BiPointSolution& bp) {
  const auto& m = inst.m();
  const auto& b1 = bp.first.radius;
  const auto& b2 = bp.second.radius;
  if (b1.empty()) throw std::invalid_argument("bi-point has an empty first solution");

  // Closest ball under a truncated distance, ties by raw distance then id.
  auto closest = [](const RadiusMap& balls, auto truncated, auto raw) {
    FacilityId best = balls.begin()->first;
    double bt = std::numeric_limits<double>::infinity(), br = bt;
    for (const auto& [x, r] : balls) {
      const double t = truncated(x, r), d = raw(x);
      if (t < bt || (t == bt && d < br)) {
        best = x;
        bt = t;
        br = d;
      }
    }
    return best;
  };

  GroupStructure g;
  for (const auto& [x, r] : b1) {
    g.groups[x];
    g.group_sum[x] = 0.0;
    g.group_max[x] = 0.0;
  }
  for (const auto& [x2, r2] : b2) {
    const FacilityId c = closest(
        b1,
        [&](FacilityId x, double r) {
          return dstar(m, Site::facility(x), Site::facility(x2), r, r2);
        },
        [&](FacilityId x) { return m.facility_dist(x, x2); });
    g.cl1_of_facility[x2] = c;
    g.groups[c].push_back(x2);
    g.group_sum[c] += r2;
    g.group_max[c] = std::max(g.group_max[c], r2);
  }
  for (const auto& [x, r] : b1) g.inflated[x] = r + 2.0 * g.group_max[x];
  for (PointId p = 0; p < m.num_points(); ++p) {
    g.cl1_of_point.push_back(closest(
        b1, [&](FacilityId x, double r) { return truncated_dist(m, p, x, r); },
        [&](FacilityId x) { return m.dist(p, x); }));
    if (!b2.empty())
      g.cl2_of_point.push_back(closest(
          b2, [&](FacilityId x, double r) { return truncated_dist(m, p, x, r); },
          [&](FacilityId x) { return m.dist(p, x); }));
  }
  return g;
}

BallSolution round_bipoint(const BallKMedianInstance& inst, const BiPointSolution& bp,
                           const Guess& guess, RoundingTrace* trace) {
  RoundingTrace local;
  RoundingTrace& tr = trace ? *trace : local;
  tr = RoundingTrace{};
  const auto& m = inst.m();
  const std::size_t n = m.num_points();
  const double rho = inst.rho;

  if (bp.a > 0.25 || ball_kmedian_cost(inst, bp.first) <= ball_kmedian_cost(inst, bp.second)) {
    tr.shortcut = true;
    return bp.first;
  }

  const GroupStructure g = build_groups(inst, bp);
  const auto& r1 = bp.first.radius;
  const auto& r2 = bp.second.radius;

  // Value of opening each group instead of its X1 facility.
  std::map<FacilityId, double> value;
  for (const auto& [x, r] : r1) value[x] = rho * (r + g.group_sum.at(x));
  for (PointId p = 0; p < n; ++p) {
    const FacilityId x2 = g.cl2_of_point[p];
    const FacilityId x1 = g.cl1_of_point[p];
    value[g.cl1_of_facility.at(x2)] +=
        truncated_dist(m, p, x1, r1.at(x1)) + truncated_dist(m, p, x2, r2.at(x2));
  }

  // Facilities with an empty group cost nothing to drop and free one slot.
  std::vector<KnapsackItem> items;
  std::vector<FacilityId> owner;
  double budget = static_cast<double>(inst.k) - static_cast<double>(r1.size());
  for (const auto& [x, members] : g.groups) {
    if (members.empty()) {
      budget += 1.0;
      continue;
    }
    owner.push_back(x);
    items.push_back({value.at(x), static_cast<double>(members.size()) - 1.0});
  }
  tr.knapsack = solve_knapsack_lp(items, budget);

  BallSolution out;
  for (std::size_t item = 0; item < owner.size(); ++item) {
    if (tr.knapsack.fractional && *tr.knapsack.fractional == item) continue;
    const FacilityId x = owner[item];
    if (tr.knapsack.u[item] >= 1.0) {
      for (FacilityId x2 : g.groups.at(x)) out.open(x2, r2.at(x2));
    } else {
      out.open(x, g.inflated.at(x));
    }
  }

  if (tr.knapsack.fractional) {
    const FacilityId special = owner[*tr.knapsack.fractional];
    const double u = tr.knapsack.u[*tr.knapsack.fractional];
    const bool special_guessed = guess.radius.count(special) > 0;
    std::vector<FacilityId> members;
    for (FacilityId x2 : g.groups.at(special))
      if (!(special_guessed && x2 == special)) members.push_back(x2);
    double member_max = 0.0;
    for (FacilityId x2 : members) member_max = std::max(member_max, r2.at(x2));
    const double special_radius = r1.at(special) + 2.0 * member_max;
    out.open(special, special_radius);

    const double size = static_cast<double>(members.size());
    const double raw = std::ceil(u * size - 1e-9) - 2.0;
    const std::size_t count = raw > 0.0 ? static_cast<std::size_t>(raw) : 0;
    // Net saving of each member: cheaper connections of its clients minus its radius cost.
    std::vector<std::pair<double, FacilityId>> ranked;
    for (FacilityId x2 : members) {
      double saving = -rho * r2.at(x2);
      for (PointId p = 0; p < n; ++p) {
        if (g.cl2_of_point[p] != x2) continue;
        saving += dotdiv(truncated_dist(m, p, special, special_radius),
                         truncated_dist(m, p, x2, r2.at(x2)));
      }
      ranked.push_back({saving, x2});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t c = 0; c < count && c < ranked.size(); ++c)
      out.open(ranked[c].second, r2.at(ranked[c].second));

    tr.special = special;
    tr.u = u;
    tr.opened_fraction =
        size > 0.0 ? static_cast<double>(std::min(count, members.size())) / size : 0.0;
    tr.ratio = (1.0 - tr.opened_fraction) / (1.0 - u);
  }
  if (out.empty()) out = bp.first;
  return out;
}

BallKMedianResult solve_ball_kmedian(const BallKMedianInstance& inst, double eps,
                                     const BallKMedianOptions& opts) {
  const auto& m = inst.m();
  if (m.num_facilities() == 0) throw std::invalid_argument("instance has no facilities");
  if (inst.k == 0) throw std::invalid_argument("k must be at least 1");
  if (!(inst.rho >= 0.0)) throw std::invalid_argument("rho must be non-negative");
  const std::size_t full = static_cast<std::size_t>(std::ceil(3.0 / eps - 1e-12));
  std::size_t top = ball_guess_size(inst, eps);
  if (opts.max_guess_size) top = std::min(top, *opts.max_guess_size);

  BallKMedianResult best;
  best.epsilon = eps;
  best.cost = std::numeric_limits<double>::infinity();
  auto consider = [&](BallSolution sol, double lambda) {
    if (sol.size() > inst.k) throw std::logic_error("rounding opened more than k balls");
    const double c = ball_kmedian_cost(inst, sol);
    if (c < best.cost) {
      best.cost = c;
      best.solution = std::move(sol);
      best.lambda_final = lambda;
    }
  };

  for (std::size_t size = 0; size <= top; ++size) {
    for_each_guess(m, size, [&](const Guess& g) {
      double radius_sum = 0.0, radius_min = std::numeric_limits<double>::infinity();
      for (const auto& [x, r] : g.radius) {
        radius_sum += r;
        radius_min = std::min(radius_min, r);
      }
      // A correct guess pays at most the optimum for its own radii.
      if (inst.rho * radius_sum > best.cost) return true;
      if (size == full && inst.rho * radius_min > eps / 3.0 * best.cost) return true;
      ++best.guesses_tried;
      if (size == inst.k) {
        BallSolution sol;
        for (const auto& [x, r] : g.radius) sol.open(x, r);
        consider(std::move(sol), 0.0);
        return true;
      }
      auto search = binary_search_bipoint(inst, eps, g);
      if (auto* exact = std::get_if<BallSolution>(&search.outcome)) {
        consider(std::move(*exact), search.lambda);
      } else {
        const auto& bp = std::get<BiPointSolution>(search.outcome);
        consider(round_bipoint(inst, bp, g), bp.lambda_first);
      }
      return true;
    });
  }
  return best;
}

}  // namespace nestnorm
