#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "doctest.h"
#include "nestnorm/msrdc.hpp"
#include "nestnorm/norms.hpp"
#include "nestnorm/oracle.hpp"
#include "support.hpp"

using namespace nestnorm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<PointId> all_points(const MetricInstance& m) {
  std::vector<PointId> v(m.num_points());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// A seeded radius cost: random weights with random thresholds.
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

}  // namespace

TEST_CASE("radius cost evaluation") {
  ThresholdCost h({1, 1}, {2, 1});
  CHECK(h(0) == 0.0);
  CHECK(h(3) == 3.0);
  ThresholdCost linear({1.5}, {0});
  CHECK(linear(2) == 3.0);
}

TEST_CASE("msrdc guesses") {
  MetricInstance m(1, 1, {0.0, 2.0, 2.0, 0.0});
  MsrdcInstance inst{&m, 1, ThresholdCost({1}, {0})};
  CHECK(msrdc_guess_size(inst, 0.5) == 1);
  int count = 0;
  for_each_guess(m, 1, [&](const Guess& g) {
    ++count;
    // Radii come from the facility-client distances and 0.
    for (const auto& [x, r] : g.radius) CHECK((r == 0.0 || r == 2.0));
    return true;
  });
  CHECK(count == 2);
  MetricInstance same(1, 1, {0.0, 0.0, 0.0, 0.0});
  count = 0;
  for_each_guess(same, 1, [&](const Guess&) { return ++count, true; });
  CHECK(count == 1);
}

TEST_CASE("some msrdc guess matches the largest balls of the optimum") {
  for (int seed = 0; seed < 15; ++seed) {
    auto sh = testing::small_shape(seed);
    auto m = testing::random_planar(seed + 40, sh.n, sh.f);
    MsrdcInstance inst{&m, sh.k, random_h(seed)};
    auto opt = exact_msrdc(m, sh.k, [&](double r) { return inst.h(r); });
    const std::size_t t = msrdc_guess_size(inst, 1.0);
    if (opt.solution.size() < t) continue;
    std::vector<std::pair<double, FacilityId>> by_radius;
    for (const auto& [x, r] : opt.solution.radius) by_radius.push_back({r, x});
    std::stable_sort(by_radius.begin(), by_radius.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    RadiusMap top;
    for (std::size_t i = 0; i < t; ++i) top[by_radius[i].second] = by_radius[i].first;
    bool found = false;
    for_each_guess(m, t, [&](const Guess& g) {
      found = found || g.radius == top;
      return !found;
    });
    CHECK(found);
  }
}

TEST_CASE("lmp on colocated clients is free") {
  auto m = MetricInstance::planar({{1, 1}, {1, 1}, {1, 1}}, {{1, 1}, {4, 4}});
  MsrdcInstance inst{&m, 1, ThresholdCost({1}, {0})};
  auto lmp = lmp_msrdc(inst, 0.0, kInf, all_points(m));
  REQUIRE(lmp.has_value());
  CHECK(msrdc_cost(inst, lmp->solution) == 0.0);
  CHECK(covers_all(m, lmp->solution));
}

TEST_CASE("lmp_msrdc: coverage, dual feasibility, witnesses and the lmp bound") {
  for (int seed = 0; seed < 40; ++seed) {
    auto sh = testing::small_shape(seed);
    auto m = testing::random_planar(seed + 60, sh.n, sh.f);
    MsrdcInstance inst{&m, sh.k, random_h(seed + 1)};
    auto opt = exact_msrdc(m, sh.k, [&](double r) { return inst.h(r); });
    const auto clients = all_points(m);
    for (double lam : {0.0, 0.1, 0.5, 2.0}) {
      auto lmp = lmp_msrdc(inst, lam, kInf, clients);
      REQUIRE(lmp.has_value());
      CHECK(covers_all(m, lmp->solution));

      for (FacilityId x = 0; x < m.num_facilities(); ++x)
        for (double r : msrdc_radii(inst, x, clients, kInf)) {
          double inside = 0.0;
          for (PointId p : clients)
            if (m.dist(p, x) <= r) inside += lmp->alpha[p];
          CHECK(inside <= lam + inst.h(r) + 1e-9);
        }

      for (const auto& w : lmp->witnesses) {
        const double rp = lmp->tight_radius.at(w.pruned), rk = lmp->tight_radius.at(w.kept);
        CHECK(rk >= rp);
        CHECK(m.dist(w.shared, w.pruned) <= rp);
        CHECK(m.dist(w.shared, w.kept) <= rk);
        for (PointId p : clients)
          if (m.dist(p, w.pruned) <= rp) CHECK(m.dist(p, w.kept) <= 2 * rp + rk + 1e-9);
      }

      double lhs = lam * static_cast<double>(lmp->solution.size());
      for (double r : lmp->solution.radii()) lhs += inst.h(r / 3.0);
      CHECK(lhs <= opt.cost + lam * static_cast<double>(sh.k) + 1e-9);
    }
  }
}

TEST_CASE("binary_search_msrdc") {
  SUBCASE("enough slots returns a cover") {
    auto m = testing::random_planar(2, 6, 3);
    MsrdcInstance inst{&m, 3, ThresholdCost({1}, {0})};
    auto s = binary_search_msrdc(inst, 0.5, kInf, all_points(m), 3);
    REQUIRE(std::holds_alternative<CoverSolution>(s.outcome));
    CHECK(covers_all(m, std::get<CoverSolution>(s.outcome)));
  }
  SUBCASE("bi-point identities and bound") {
    int bipoints = 0;
    for (int seed = 0; seed < 40; ++seed) {
      auto sh = testing::small_shape(seed);
      auto m = testing::random_planar(seed + 80, sh.n, sh.f);
      MsrdcInstance inst{&m, sh.k, random_h(seed + 2)};
      auto opt = exact_msrdc(m, sh.k, [&](double r) { return inst.h(r); });
      const double eps = 0.5;
      auto s = binary_search_msrdc(inst, eps, kInf, all_points(m), sh.k);
      if (auto* c = std::get_if<CoverSolution>(&s.outcome)) {
        CHECK(c->size() <= sh.k);
        CHECK(covers_all(m, *c));
        continue;
      }
      REQUIRE(std::holds_alternative<MsrdcBiPoint>(s.outcome));
      ++bipoints;
      const auto& bp = std::get<MsrdcBiPoint>(s.outcome);
      CHECK(bp.a + bp.b == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(bp.a * bp.first.size() + bp.b * bp.second.size() ==
            doctest::Approx(static_cast<double>(sh.k)).epsilon(1e-9));
      CHECK(covers_all(m, bp.first));
      CHECK(covers_all(m, bp.second));
      const double mix = bp.a * msrdc_cost(inst, bp.first, 3.0) + bp.b * msrdc_cost(inst, bp.second, 3.0);
      CHECK(mix <= (1 + eps) * opt.cost + 1e-9);

      MsrdcRoundingTrace tr;
      auto out = round_bipoint_msrdc(inst, bp, all_points(m), sh.k, &tr);
      CHECK(out.size() <= sh.k);
      CHECK(covers_all(m, out));
      CHECK(msrdc_cost(inst, out, 9.0) <= (2 + 3 * eps) * opt.cost + 1e-9);
    }
    MESSAGE(bipoints << " bi-points");
  }
}

TEST_CASE("solve_msrdc") {
  SUBCASE("k = |F| with colocated clients costs nothing") {
    auto m = MetricInstance::planar({{0, 0}, {3, 3}}, {{0, 0}, {3, 3}});
    auto r = solve_msrdc({&m, 2, ThresholdCost({1}, {0})}, 0.5);
    CHECK(r.cost == 0.0);
    CHECK(covers_all(m, r.solution));
  }
  SUBCASE("single tight cluster") {
    // Four clients at distance 1 from the middle facility; a far facility is useless.
    auto m = MetricInstance::planar({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {{0, 0}, {20, 20}});
    MsrdcInstance inst{&m, 1, ThresholdCost({1}, {0})};
    auto r = solve_msrdc(inst, 0.5);
    CHECK(r.solution.radius.count(0) == 1);
    CHECK(r.solution.radius.at(0) >= 1.0);
    CHECK(r.cost <= 9.0 * 3.5 + 1e-9);
  }
  SUBCASE("bound against the oracle") {
    for (int seed = 0; seed < 15; ++seed) {
      auto sh = testing::small_shape(seed);
      auto m = testing::random_planar(seed + 120, sh.n, sh.f);
      MsrdcInstance inst{&m, sh.k, random_h(seed + 3)};
      auto opt = exact_msrdc(m, sh.k, [&](double r) { return inst.h(r); });
      auto r = solve_msrdc(inst, 0.5);
      CHECK(r.solution.size() <= sh.k);
      CHECK(covers_all(m, r.solution));
      CHECK(r.scaled_cost == doctest::Approx(msrdc_cost(inst, r.solution, 9.0)));
      CHECK(r.scaled_cost <= 3.5 * opt.cost + 1e-9);
    }
  }
}

TEST_CASE("solve_linf_ord") {
  SUBCASE("single point") {
    auto m = MetricInstance::planar({{2, 2}}, {{2, 2}, {0, 0}});
    auto r = solve_linf_ord(m, 1, std::vector<double>{1.0}, 1.0);
    CHECK(r.value == 0.0);
    CHECK(covers_all(m, r.solution));
  }
  SUBCASE("k-center and min-sum-of-radii weights against the oracle") {
    for (int seed = 0; seed < 10; ++seed) {
      auto sh = testing::small_shape(seed);
      auto m = testing::random_planar(seed + 150, sh.n, sh.f);
      for (const auto& w : {std::vector<double>(sh.k, 1.0), std::vector<double>{1.0}}) {
        auto opt = exact_cover_ord(m, sh.k, w);
        auto r = solve_linf_ord(m, sh.k, w, 1.0);
        CHECK(covers_all(m, r.solution));
        CHECK(r.solution.size() <= sh.k);
        CHECK(r.value == doctest::Approx(ordered_norm_padded(w, r.solution.radii())));
        CHECK(r.value <= 19.0 * opt.cost + 1e-9);
      }
    }
  }
  SUBCASE("threshold candidates") {
    auto m = MetricInstance::planar({{0, 0}, {3, 0}}, {{0, 0}});
    auto c = threshold_candidates(m, 1.0);
    CHECK(c == std::vector<double>{0.0, 2.0});
  }
}

TEST_CASE("threshold enumeration contains a near-optimal proxy") {
  for (int seed = 0; seed < 10; ++seed) {
    auto sh = testing::small_shape(seed);
    auto m = testing::random_planar(seed + 170, sh.n, sh.f);
    const double eps = 0.5;
    std::vector<double> w(sh.k);
    for (std::size_t i = 0; i < sh.k; ++i) w[i] = 1.0 / static_cast<double>(i + 1);
    auto wt = sparsify_weights(w, eps);
    auto opt = exact_cover_ord(m, sh.k, wt);
    auto r = opt.solution.radii();
    r.resize(sh.k, 0.0);
    std::sort(r.begin(), r.end(), std::greater<>());
    double best = kInf;
    for (const auto& t : enumerate_thresholds(wt, threshold_candidates(m, eps)))
      best = std::min(best, proxy_ordered(r, wt, t));
    CHECK(best <= (1 + eps) * ordered_norm(wt, r) + 1e-9);
  }
}
