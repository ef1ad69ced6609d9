#pragma once

#include <random>
#include <vector>

#include "nestnorm/metric.hpp"

namespace nestnorm::testing {

// Random points and facilities in the unit square.
inline MetricInstance random_planar(std::uint64_t seed, std::size_t n, std::size_t f) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point2> pts(n), fac(f);
  for (auto& p : pts) p = {u(rng), u(rng)};
  for (auto& q : fac) q = {u(rng), u(rng)};
  return MetricInstance::planar(std::move(pts), std::move(fac));
}

// Random points with facilities placed on a subset of them.
inline MetricInstance random_on_points(std::uint64_t seed, std::size_t n, std::size_t f) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point2> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  std::vector<Point2> fac(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(f));
  return MetricInstance::planar(std::move(pts), std::move(fac));
}

// Shape of a seeded small instance: n in [3,8], f in [2,5], k in [1,3].
struct SmallShape {
  std::size_t n, f, k;
};

inline SmallShape small_shape(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 13);
  return {3 + rng() % 6, 2 + rng() % 4, 1 + rng() % 3};
}

}  // namespace nestnorm::testing
