// Acceptance run: one PASS/FAIL line per criterion. Exit status is non-zero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "nestnorm/ball_kmedian.hpp"
#include "nestnorm/experiment.hpp"
#include "nestnorm/io.hpp"
#include "nestnorm/knapsack.hpp"
#include "nestnorm/msrdc.hpp"
#include "nestnorm/norms.hpp"
#include "nestnorm/oracle.hpp"
#include "nestnorm/reductions.hpp"
#include "support.hpp"

using namespace nestnorm;

namespace {

constexpr double kTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tally {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;
  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first_failure = what;
  }
};

// Cardinality and coverage of every final solution, across criteria.
Tally g_invariants;

void final_solution(std::size_t size, std::size_t k, const std::string& where) {
  g_invariants.check(size <= k, where + ": more than k centers");
}

void final_cover(const MetricInstance& m, const CoverSolution& sol, std::size_t k,
                 const std::string& where) {
  final_solution(sol.size(), k, where);
  g_invariants.check(covers_all(m, sol), where + ": cover misses a client");
}

int g_failed = 0;

void report(int id, const Tally& t, double seconds, double limit, const std::string& detail) {
  const bool ok = t.failures == 0 && seconds <= limit;
  if (!ok) ++g_failed;
  std::printf("criterion %d: %s  checks=%zu failures=%zu time=%.2fs (limit %.0fs)%s%s\n", id,
              ok ? "PASS" : "FAIL", t.checks, t.failures, seconds, limit,
              detail.empty() ? "" : "  ", detail.c_str());
  if (t.failures) std::printf("  first failure: %s\n", t.first_failure.c_str());
  if (seconds > limit) std::printf("  over the time limit\n");
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string tag(int seed) { return "seed " + std::to_string(seed); }

std::vector<PointId> all_points(const MetricInstance& m) {
  std::vector<PointId> v(m.num_points());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

ThresholdCost random_h(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t len = 1 + rng() % 3;
  std::vector<double> w(len), t(len);
  for (auto& v : w) v = u(rng);
  for (auto& v : t) v = 0.5 * u(rng);
  std::sort(w.begin(), w.end(), std::greater<>());
  std::sort(t.begin(), t.end(), std::greater<>());
  if (seed % 3 == 0) std::fill(t.begin(), t.end(), 0.0);
  return ThresholdCost::from_weights(w, t);
}

std::vector<double> random_sorted(std::mt19937_64& rng, std::size_t len) {
  std::vector<double> w(len);
  for (auto& v : w) v = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

std::vector<double> sorted_desc(std::vector<double> x) {
  std::sort(x.begin(), x.end(), std::greater<>());
  return x;
}

// Ratio with the convention 0/0 = 1.
double ratio(double cost, double opt) {
  if (opt <= kTol) return cost <= kTol ? 1.0 : kInf;
  return cost / opt;
}

void criterion_proxy() {
  const auto start = std::chrono::steady_clock::now();
  Tally t;
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<double> x(n);
    for (auto& v : x) v = u(rng);
    const auto desc = sorted_desc(x);

    const std::size_t ell = 1 + rng() % n;
    const double norm = top_ell(x, ell);
    t.check(proxy_topl(u(rng), x, ell) >= norm - kTol, "top-l proxy below the norm");
    t.check(std::abs(proxy_topl(desc[ell - 1], x, ell) - norm) <= kTol, "top-l proxy not tight");

    auto w = random_sorted(rng, n);
    std::vector<double> th(n);
    for (auto& v : th) v = u(rng);
    std::sort(th.begin(), th.end(), std::greater<>());
    const double ord = ordered_norm(w, x);
    t.check(proxy_ordered(x, w, th) >= ord - kTol, "ordered proxy below the norm");
    t.check(std::abs(proxy_ordered(x, w, desc) - ord) <= kTol, "ordered proxy not tight");
  }
  report(1, t, seconds_since(start), 1.0, "1000 samples per family");
}

void criterion_round_trip() {
  const auto start = std::chrono::steady_clock::now();
  Tally t;
  std::mt19937_64 rng(1002);
  for (int seed = 0; seed < 200; ++seed) {
    auto sh = testing::small_shape(seed + 2000);
    auto m = testing::random_planar(seed + 2000, sh.n, sh.f);
    const std::size_t ell = 1 + rng() % sh.n;
    BallKMedianInstance inst{&m, sh.k, static_cast<double>(ell)};

    AssignmentSolution a;
    std::vector<FacilityId> fac(sh.f);
    std::iota(fac.begin(), fac.end(), 0);
    std::shuffle(fac.begin(), fac.end(), rng);
    a.centers.assign(fac.begin(), fac.begin() + static_cast<std::ptrdiff_t>(1 + rng() % std::min(sh.k, sh.f)));
    for (PointId p = 0; p < sh.n; ++p) a.assign.push_back(a.centers[rng() % a.centers.size()]);
    t.check(ball_kmedian_cost(inst, reduce_topl_solution(m, a, ell)) <= topl_l1_cost(m, a, ell) + kTol,
            tag(seed) + ": reduce increased the cost");

    BallSolution b;
    std::shuffle(fac.begin(), fac.end(), rng);
    const std::size_t open = 1 + rng() % std::min(sh.k, sh.f);
    for (std::size_t i = 0; i < open; ++i) {
      auto radii = guess_radii(m, fac[i]);
      b.open(fac[i], radii[rng() % radii.size()]);
    }
    t.check(topl_l1_cost(m, lift_ball_solution(m, b), ell) <= ball_kmedian_cost(inst, b) + kTol,
            tag(seed) + ": lift increased the cost");
  }
  report(2, t, seconds_since(start), 5.0, "200 instances, both directions");
}

// Criteria 3 and 4 share the same primal-dual runs, so both report the combined time.
void criteria_dual_and_lmp() {
  const auto start = std::chrono::steady_clock::now();
  Tally dual, lmp;
  double worst_lmp = 0.0;
  std::size_t runs = 0;
  std::mt19937_64 rng(1003);
  auto check_ball_dual = [&](const BallKMedianInstance& inst, double lam, const Guess& g,
                             const LmpResult& run, const std::string& where) {
    ++runs;
    dual.check(dual_violation(inst, lam, g, run.dual) <= kTol, where + ": dual constraint");
    dual.check(std::abs(contributing_identity_gap(inst, lam, g, run)) <= kTol,
               where + ": contributing-client identity");
    dual.check(noncontributing_excess(inst, run) <= kTol, where + ": non-contributing bound");
  };
  for (int seed = 0; seed < 50; ++seed) {
    auto sh = testing::small_shape(seed + 3000);
    auto m = testing::random_planar(seed + 3000, sh.n, sh.f);
    BallKMedianInstance inst{&m, sh.k, 1.0 + seed % 4};
    const double opt = exact_ball_kmedian(inst).cost;
    Guess guess;
    const FacilityId gx = rng() % sh.f;
    const auto radii = guess_radii(m, gx);
    guess.radius[gx] = radii[rng() % radii.size()];
    for (double lam : {0.0, 0.05, 0.3, 1.0, 4.0}) {
      const auto plain = lmp_primal_dual(inst, lam, Guess{});
      const double lhs = ball_kmedian_cost(inst, plain.solution) + 3 * lam * static_cast<double>(plain.solution.size());
      const double rhs = 3 * (opt + lam * static_cast<double>(inst.k));
      lmp.check(lhs <= rhs * (1 + 1e-6) + kTol, tag(seed) + ": lmp bound");
      if (rhs > 0) worst_lmp = std::max(worst_lmp, lhs / rhs);
      check_ball_dual(inst, lam, Guess{}, plain, tag(seed));
      check_ball_dual(inst, lam, guess, lmp_primal_dual(inst, lam, guess), tag(seed) + " with a guess");
    }
  }
  for (int seed = 0; seed < 30; ++seed) {
    auto sh = testing::small_shape(seed + 3100);
    auto m = testing::random_planar(seed + 3100, sh.n, sh.f);
    MsrdcInstance inst{&m, sh.k, random_h(seed + 3100)};
    const auto clients = all_points(m);
    for (double lam : {0.0, 0.1, 0.5, 2.0}) {
      auto r = lmp_msrdc(inst, lam, kInf, clients);
      ++runs;
      dual.check(r.has_value(), tag(seed) + ": msrdc primal-dual found no cover");
      if (!r) continue;
      for (FacilityId x = 0; x < m.num_facilities(); ++x)
        for (double rad : msrdc_radii(inst, x, clients, kInf)) {
          double inside = 0.0;
          for (PointId p : clients)
            if (m.dist(p, x) <= rad) inside += r->alpha[p];
          dual.check(inside <= lam + inst.h(rad) + kTol, tag(seed) + ": msrdc dual constraint");
        }
    }
  }
  const double total = seconds_since(start);
  report(3, dual, total, 30.0, std::to_string(runs) + " primal-dual runs");
  report(4, lmp, total, 120.0, "50 instances x 5 lambda, worst lhs/rhs " + fmt("%.4f", worst_lmp));
}

void criterion_ball_ratio() {
  const auto start = std::chrono::steady_clock::now();
  Tally t;
  const double eps = 0.5, bound = 13.5 + 7.5 * eps;
  double worst = 0.0;
  for (int seed = 0; seed < 50; ++seed) {
    auto sh = testing::small_shape(seed + 5000);
    auto m = testing::random_planar(seed + 5000, sh.n, sh.f);
    const double rho = seed % 3 == 0 ? 1.0 : seed % 3 == 1 ? 2.0 : static_cast<double>(sh.n);
    BallKMedianInstance inst{&m, sh.k, rho};
    const double opt = exact_ball_kmedian(inst).cost;
    auto r = solve_ball_kmedian(inst, eps);
    final_solution(r.solution.size(), sh.k, "ball k-median " + tag(seed));
    t.check(std::abs(r.cost - ball_kmedian_cost(inst, r.solution)) <= kTol, tag(seed) + ": reported cost");
    const double q = ratio(r.cost, opt);
    t.check(q <= bound + kTol, tag(seed) + ": ratio " + fmt("%.4f", q));
    worst = std::max(worst, q);
  }
  report(5, t, seconds_since(start), 600.0, "worst ratio " + fmt("%.4f", worst) + " vs bound 17.25");
}

void criterion_knapsack() {
  const auto start = std::chrono::steady_clock::now();
  Tally t;
  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    std::vector<KnapsackItem> items(rng() % 13);
    double total = 0.0;
    for (auto& it : items) {
      it = {10 * u(rng) - 1, rng() % 5 == 0 ? 0.0 : 5 * u(rng)};
      total += it.weight;
    }
    const double budget = total * u(rng);
    auto g = solve_knapsack_lp(items, budget);
    auto e = exact_knapsack_vertices(items, budget);
    const std::string name = "instance " + std::to_string(i);
    t.check(std::abs(g.value - e.value) <= 1e-9 * std::max(1.0, std::abs(e.value)), name + ": value");
    std::size_t fractional = 0;
    double used = 0.0;
    for (std::size_t j = 0; j < items.size(); ++j) {
      if (g.u[j] > kTol && g.u[j] < 1 - kTol) ++fractional;
      used += items[j].weight * g.u[j];
    }
    t.check(fractional <= 1, name + ": more than one fractional item");
    t.check(used <= budget + kTol, name + ": over budget");
    if (fractional == 1) t.check(std::abs(used - budget) <= 1e-9 * std::max(1.0, budget), name + ": slack");
  }
  report(6, t, seconds_since(start), 10.0, "500 instances");
}

void criterion_msrdc() {
  const auto start = std::chrono::steady_clock::now();
  Tally t;
  const double eps = 0.5;
  double worst = 0.0;
  for (int seed = 0; seed < 30; ++seed) {
    auto sh = testing::small_shape(seed + 7000);
    auto m = testing::random_planar(seed + 7000, sh.n, sh.f);
    MsrdcInstance inst{&m, sh.k, random_h(seed + 7000)};
    const double opt = exact_msrdc(m, sh.k, [&](double r) { return inst.h(r); }).cost;
    auto r = solve_msrdc(inst, eps);
    final_cover(m, r.solution, sh.k, "msrdc " + tag(seed));
    t.check(covers_all(m, r.solution), tag(seed) + ": coverage");
    const double scaled = msrdc_cost(inst, r.solution, 9.0);
    const double q = ratio(scaled, opt);
    t.check(scaled <= (2 + 3 * eps) * opt + kTol, tag(seed) + ": ratio " + fmt("%.4f", q));
    worst = std::max(worst, q);
  }
  report(7, t, seconds_since(start), 600.0, "worst sum h(r/9) / OPT " + fmt("%.4f", worst) + " vs bound 3.5");
}

void criterion_linf_ord() {
  const auto start = std::chrono::steady_clock::now();
  Tally t;
  const double eps = 1.0, bound = 18 + eps;
  double worst = 0.0;
  std::mt19937_64 rng(1008);
  for (int seed = 0; seed < 20; ++seed) {
    auto sh = testing::small_shape(seed + 8000);
    auto m = testing::random_planar(seed + 8000, sh.n, sh.f);
    const std::vector<std::pair<const char*, std::vector<double>>> weights{
        {"uniform", std::vector<double>(sh.k, 1.0)}, {"top-1", {1.0}}, {"random", random_sorted(rng, sh.k)}};
    for (const auto& [name, w] : weights) {
      const double opt = exact_cover_ord(m, sh.k, w).cost;
      auto r = solve_linf_ord(m, sh.k, w, eps);
      final_cover(m, r.solution, sh.k, std::string("linf/ord ") + name + " " + tag(seed));
      const double value = ordered_norm_padded(w, r.solution.radii());
      t.check(std::abs(value - r.value) <= kTol, tag(seed) + ": reported value");
      const double q = ratio(value, opt);
      t.check(value <= bound * opt + kTol, tag(seed) + " " + name + ": ratio " + fmt("%.4f", q));
      worst = std::max(worst, q);
    }
  }
  report(8, t, seconds_since(start), 900.0, "worst ratio " + fmt("%.4f", worst) + " vs bound 19");
}

void criterion_reductions() {
  const auto start = std::chrono::steady_clock::now();
  Tally t;
  const double eps = 0.5;
  double worst[3] = {0, 0, 0};
  std::mt19937_64 rng(1009);
  auto wrap = [&](NormSpec inner) {
    return NestedSolver{[inner, eps](const MetricInstance& m, std::size_t k) {
                          return dispatch(m, k, inner, NormSpec::l1(), eps);
                        },
                        inner.describe()};
  };
  const auto l1 = wrap(NormSpec::l1()), linf = wrap(NormSpec::linf());
  for (int seed = 0; seed < 20; ++seed) {
    auto sh = testing::small_shape(seed + 9000);
    auto m = testing::random_planar(seed + 9000, sh.n, sh.f);
    auto w = random_sorted(rng, sh.n);
    if (seed % 4 == 0) w.assign(sh.n, 1.0);
    if (seed % 4 == 1) w = {1.0};
    const double opt = exact_assignment(m, sh.k, [&](const AssignmentSolution& s) {
                         return nested_cost(m, sh.k, NormSpec::ord(w), NormSpec::l1(), s);
                       }).cost;
    const Approximation results[3] = {reduce_inner_ord_to_l1(m, sh.k, w, NormSpec::l1(), l1),
                                      reduce_inner_ord_to_linf(m, sh.k, w, NormSpec::l1(), linf),
                                      best_of_pair(m, sh.k, w, NormSpec::l1(), l1, linf)};
    const char* names[3] = {"ord->l1", "ord->linf", "best of pair"};
    for (int i = 0; i < 3; ++i) {
      const auto& a = results[i];
      final_solution(a.solution.centers.size(), sh.k, std::string(names[i]) + " " + tag(seed));
      const double cost = nested_cost(m, sh.k, NormSpec::ord(w), NormSpec::l1(), a.solution);
      t.check(std::abs(cost - a.cost) <= 1e-9 * std::max(1.0, cost), tag(seed) + ": reported cost");
      const double q = ratio(cost, opt);
      t.check(cost <= a.factor * opt + kTol, std::string(names[i]) + " " + tag(seed) + ": ratio " +
                                                 fmt("%.4f", q) + " factor " + fmt("%.4f", a.factor));
      worst[i] = std::max(worst[i], q);
    }
  }
  report(9, t, seconds_since(start), 300.0,
         "worst ratios " + fmt("%.4f", worst[0]) + ", " + fmt("%.4f", worst[1]) + ", " +
             fmt("%.4f", worst[2]));
}

void criterion_fixture() {
  const auto start = std::chrono::steady_clock::now();
  Tally t;
  // Recovery values recorded from the committed fixture at eps = 0.5 with full guessing.
  struct Config {
    const char* name;
    NormSpec inner;
    double recorded;
  };
  const Config configs[] = {{"topl:8", NormSpec::topl(8), 1.0},
                            {"l1 (k-median-like)", NormSpec::l1(), 0.975},
                            {"linf (msr-like)", NormSpec::linf(), 0.525}};
  const auto path = std::filesystem::path(NESTNORM_SOURCE_DIR) / "fixtures" / "two_gaussians.json";
  std::string detail;
  try {
    auto inst = load_instance(path);
    double got[3];
    for (int i = 0; i < 3; ++i) {
      auto a = dispatch(inst.metric, inst.k, configs[i].inner, NormSpec::l1(), 0.5);
      final_solution(a.solution.centers.size(), inst.k, std::string("fixture ") + configs[i].name);
      got[i] = recovery_score(a.solution, inst.labels);
      t.check(std::abs(got[i] - configs[i].recorded) <= 1e-12,
              std::string(configs[i].name) + ": recovery " + fmt("%.4f", got[i]) + " differs from the recorded value");
      detail += std::string(i ? ", " : "") + configs[i].name + " " + fmt("%.3f", got[i]);
    }
    t.check(got[0] >= 0.9, "top-l recovery below 0.9");
    t.check(got[1] < got[0], "k-median-like recovery not strictly lower");
    t.check(got[2] < got[0], "msr-like recovery not strictly lower");
  } catch (const std::exception& e) {
    t.check(false, e.what());
  }
  report(10, t, seconds_since(start), 60.0, detail);
}

}  // namespace

int main() {
  criterion_proxy();
  criterion_round_trip();
  criteria_dual_and_lmp();
  criterion_ball_ratio();
  criterion_knapsack();
  criterion_msrdc();
  criterion_linf_ord();
  criterion_reductions();
  criterion_fixture();
  report(11, g_invariants, 0.0, 1.0, "final solutions checked across criteria 5 and 7-10");
  std::printf("%d criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
