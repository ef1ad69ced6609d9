#include "nestnorm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "nestnorm/norms.hpp"

namespace nestnorm {

namespace {

double binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0.0;
  double out = 1.0;
  for (std::size_t i = 1; i <= r; ++i) out = out * static_cast<double>(n - r + i) / static_cast<double>(i);
  return std::round(out);
}

void check_sizes(const MetricInstance& m, std::size_t k, const OracleBudget& budget) {
  if (m.num_points() > budget.max_points || m.num_facilities() > budget.max_facilities ||
      k > budget.max_k) {
    throw OracleBudgetExceeded(
        "oracle budget exceeded: instance has " + std::to_string(m.num_points()) + " points, " +
        std::to_string(m.num_facilities()) + " facilities, k=" + std::to_string(k) +
        " (limits " + std::to_string(budget.max_points) + "/" +
        std::to_string(budget.max_facilities) + "/" + std::to_string(budget.max_k) + ")");
  }
  if (m.num_facilities() == 0) throw std::invalid_argument("instance has no facilities");
  if (k == 0) throw std::invalid_argument("k must be at least 1");
}

void check_states(double states, const OracleBudget& budget) {
  if (states > budget.max_states) {
    throw OracleBudgetExceeded("oracle budget exceeded: " +
                               std::to_string(static_cast<long long>(states)) +
                               " states above the limit of " +
                               std::to_string(static_cast<long long>(budget.max_states)));
  }
}

// Visits every facility subset with 1..k members in lexicographic order.
void for_each_subset(std::size_t nf, std::size_t k,
                     const std::function<void(const std::vector<FacilityId>&)>& visit) {
  for (std::size_t s = 1; s <= std::min(k, nf); ++s) {
    std::vector<FacilityId> sub(s);
    std::iota(sub.begin(), sub.end(), 0);
    while (true) {
      visit(sub);
      std::size_t i = s;
      while (i > 0 && sub[i - 1] == nf - s + i - 1) --i;
      if (i == 0) break;
      ++sub[i - 1];
      for (std::size_t j = i; j < s; ++j) sub[j] = sub[j - 1] + 1;
    }
  }
}

std::vector<std::vector<double>> radius_domains(const MetricInstance& m) {
  std::vector<std::vector<double>> out(m.num_facilities());
  for (FacilityId x = 0; x < m.num_facilities(); ++x) out[x] = guess_radii(m, x);
  return out;
}

// Visits every radius assignment of `sub` from the per-facility domains.
void for_each_radii(const std::vector<FacilityId>& sub,
                    const std::vector<std::vector<double>>& dom,
                    const std::function<void(const std::vector<double>&)>& visit) {
  std::vector<std::size_t> pick(sub.size(), 0);
  std::vector<double> r(sub.size());
  while (true) {
    for (std::size_t i = 0; i < sub.size(); ++i) r[i] = dom[sub[i]][pick[i]];
    visit(r);
    std::size_t i = 0;
    for (; i < sub.size(); ++i) {
      if (++pick[i] < dom[sub[i]].size()) break;
      pick[i] = 0;
    }
    if (i == sub.size()) return;
  }
}

double radius_states(const MetricInstance& m, std::size_t k) {
  const double per = static_cast<double>(m.num_points() + 1);
  double states = 0.0;
  for (std::size_t s = 1; s <= std::min(k, m.num_facilities()); ++s)
    states += binomial(m.num_facilities(), s) * std::pow(per, static_cast<double>(s));
  return states;
}

}  // namespace

OracleBudget OracleBudget::from_env() {
  OracleBudget b;
  if (const char* v = std::getenv("NESTNORM_MAX_STATES")) {
    char* end = nullptr;
    const double parsed = std::strtod(v, &end);
    if (end == v || !(parsed > 0.0))
      throw std::invalid_argument(std::string("NESTNORM_MAX_STATES is not a positive number: ") + v);
    b.max_states = parsed;
  }
  return b;
}

ExactBallResult exact_ball_kmedian(const BallKMedianInstance& inst, const OracleBudget& budget) {
  const auto& m = inst.m();
  check_sizes(m, inst.k, budget);
  check_states(radius_states(m, inst.k), budget);
  const auto dom = radius_domains(m);
  ExactBallResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for_each_subset(m.num_facilities(), inst.k, [&](const std::vector<FacilityId>& sub) {
    for_each_radii(sub, dom, [&](const std::vector<double>& r) {
      double cost = 0.0;
      for (double ri : r) cost += inst.rho * ri;
      if (cost >= best.cost) return;
      for (PointId p = 0; p < m.num_points(); ++p) {
        double c = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < sub.size(); ++i) c = std::min(c, dotdiv(m.dist(p, sub[i]), r[i]));
        cost += c;
      }
      if (cost < best.cost) {
        best.cost = cost;
        best.solution = BallSolution{};
        for (std::size_t i = 0; i < sub.size(); ++i) best.solution.open(sub[i], r[i]);
      }
    });
  });
  return best;
}

ExactBallResult exact_ball_kmedian_by_assignment(const BallKMedianInstance& inst,
                                                 const OracleBudget& budget) {
  const auto& m = inst.m();
  OracleBudget tighter = budget;
  tighter.max_points = std::min<std::size_t>(budget.max_points, 7);
  check_sizes(m, inst.k, tighter);
  const std::size_t n = m.num_points();
  double states = 0.0;
  for (std::size_t s = 1; s <= std::min(inst.k, m.num_facilities()); ++s)
    states += binomial(m.num_facilities(), s) * std::pow(static_cast<double>(s), static_cast<double>(n));
  check_states(states, budget);

  ExactBallResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for_each_subset(m.num_facilities(), inst.k, [&](const std::vector<FacilityId>& sub) {
    const std::size_t s = sub.size();
    std::vector<std::size_t> to(n, 0);
    while (true) {
      double cost = 0.0;
      BallSolution sol;
      for (std::size_t i = 0; i < s; ++i) {
        // Cluster cost rho*r + sum (d -. r) is convex piecewise linear in r with
        // breakpoints at the member distances.
        std::vector<double> ds;
        for (PointId p = 0; p < n; ++p)
          if (to[p] == i) ds.push_back(m.dist(p, sub[i]));
        double best_c = std::numeric_limits<double>::infinity(), best_r = 0.0;
        std::vector<double> cand = ds;
        cand.push_back(0.0);
        for (double r : cand) {
          double c = inst.rho * r;
          for (double d : ds) c += dotdiv(d, r);
          if (c < best_c || (c == best_c && r < best_r)) {
            best_c = c;
            best_r = r;
          }
        }
        cost += best_c;
        sol.open(sub[i], best_r);
      }
      if (cost < best.cost) {
        best.cost = cost;
        best.solution = sol;
      }
      std::size_t p = 0;
      for (; p < n; ++p) {
        if (++to[p] < s) break;
        to[p] = 0;
      }
      if (p == n) break;
    }
  });
  return best;
}

ExactCoverResult exact_cover(const MetricInstance& m, std::size_t k,
                             const std::function<double(std::span<const double>)>& cost,
                             const OracleBudget& budget) {
  check_sizes(m, k, budget);
  check_states(radius_states(m, k), budget);
  const auto dom = radius_domains(m);
  ExactCoverResult best;
  best.cost = std::numeric_limits<double>::infinity();
  bool found = false;
  for_each_subset(m.num_facilities(), k, [&](const std::vector<FacilityId>& sub) {
    for_each_radii(sub, dom, [&](const std::vector<double>& r) {
      for (PointId p = 0; p < m.num_points(); ++p) {
        bool covered = false;
        for (std::size_t i = 0; i < sub.size() && !covered; ++i) covered = m.dist(p, sub[i]) <= r[i];
        if (!covered) return;
      }
      const double c = cost(r);
      if (!found || c < best.cost) {
        found = true;
        best.cost = c;
        best.solution = BallSolution{};
        for (std::size_t i = 0; i < sub.size(); ++i) best.solution.open(sub[i], r[i]);
      }
    });
  });
  return best;
}

ExactCoverResult exact_cover_ord(const MetricInstance& m, std::size_t k,
                                 std::span<const double> w, const OracleBudget& budget) {
  const std::vector<double> weights(w.begin(), w.end());
  check_weights(weights);
  return exact_cover(
      m, k, [&](std::span<const double> r) { return ordered_norm_padded(weights, r); }, budget);
}

ExactCoverResult exact_msrdc(const MetricInstance& m, std::size_t k,
                             const std::function<double(double)>& h,
                             const OracleBudget& budget) {
  return exact_cover(
      m, k,
      [&](std::span<const double> r) {
        double s = 0.0;
        for (double ri : r) s += h(ri);
        return s;
      },
      budget);
}

ExactAssignmentResult exact_assignment(
    const MetricInstance& m, std::size_t k,
    const std::function<double(const AssignmentSolution&)>& cost,
    const OracleBudget& budget) {
  check_sizes(m, k, budget);
  const std::size_t n = m.num_points();
  double states = 0.0;
  for (std::size_t s = 1; s <= std::min(k, m.num_facilities()); ++s)
    states += binomial(m.num_facilities(), s) * std::pow(static_cast<double>(s), static_cast<double>(n));
  check_states(states, budget);

  ExactAssignmentResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for_each_subset(m.num_facilities(), k, [&](const std::vector<FacilityId>& sub) {
    AssignmentSolution sol;
    sol.centers = sub;
    sol.assign.assign(n, sub[0]);
    std::vector<std::size_t> to(n, 0);
    while (true) {
      for (PointId p = 0; p < n; ++p) sol.assign[p] = sub[to[p]];
      const double c = cost(sol);
      if (c < best.cost) {
        best.cost = c;
        best.solution = sol;
      }
      std::size_t p = 0;
      for (; p < n; ++p) {
        if (++to[p] < sub.size()) break;
        to[p] = 0;
      }
      if (p == n) break;
    }
  });
  return best;
}

KnapsackResult exact_knapsack_vertices(std::span<const KnapsackItem> items, double budget) {
  if (items.size() > 12) throw OracleBudgetExceeded("knapsack oracle handles at most 12 items");
  if (budget < 0.0) throw std::invalid_argument("knapsack budget must be non-negative");
  const std::size_t n = items.size();
  KnapsackResult best;
  best.u.assign(n, 0.0);
  best.value = 0.0;
  const double tol = 1e-12;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double w = 0.0, v = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        w += items[i].weight;
        v += items[i].value;
      }
    if (w > budget + tol) continue;
    auto record = [&](double value, std::optional<std::size_t> frac, double uf) {
      if (value <= best.value + tol) return;
      best.value = value;
      best.fractional = frac;
      for (std::size_t i = 0; i < n; ++i) best.u[i] = (mask >> i & 1) ? 1.0 : 0.0;
      if (frac) best.u[*frac] = uf;
    };
    record(v, std::nullopt, 0.0);
    // One fractional item filling the remaining budget exactly.
    for (std::size_t j = 0; j < n; ++j) {
      if ((mask >> j & 1) || items[j].weight <= 0.0) continue;
      const double uf = (budget - w) / items[j].weight;
      if (uf > 0.0 && uf < 1.0) record(v + uf * items[j].value, j, uf);
    }
  }
  return best;
}

}  // namespace nestnorm
