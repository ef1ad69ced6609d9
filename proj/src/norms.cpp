#include "nestnorm/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "nestnorm/metric.hpp"

namespace nestnorm {

namespace {

std::vector<double> sorted_desc(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

double top_ell(std::span<const double> x, std::size_t ell) {
  if (ell == 0 || ell > x.size()) {
    throw std::invalid_argument("top_ell: ell=" + std::to_string(ell) +
                                " out of range for length " + std::to_string(x.size()));
  }
  std::vector<double> v(x.begin(), x.end());
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(ell - 1), v.end(),
                   std::greater<>());
  double s = 0.0;
  for (std::size_t i = 0; i < ell; ++i) s += v[i];
  return s;
}

double ordered_norm(std::span<const double> w, std::span<const double> x) {
  if (w.size() != x.size()) {
    throw std::invalid_argument("ordered_norm: weight length " + std::to_string(w.size()) +
                                " != vector length " + std::to_string(x.size()));
  }
  const auto v = sorted_desc(x);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i];
  return s;
}

double ordered_norm_padded(std::span<const double> w, std::span<const double> x) {
  const auto v = sorted_desc(x);
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(v.size(), w.size()); ++i) s += w[i] * v[i];
  return s;
}

double proxy_topl(double y, std::span<const double> x, std::size_t ell) {
  double s = static_cast<double>(ell) * y;
  for (double xi : x) s += dotdiv(xi, y);
  return s;
}

double proxy_ordered(std::span<const double> x, std::span<const double> w,
                     std::span<const double> t) {
  if (w.size() != t.size()) {
    throw std::invalid_argument("proxy_ordered: thresholds must match weight length");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] > t[i - 1]) throw std::invalid_argument("proxy_ordered: thresholds must be non-increasing");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double next = i + 1 < w.size() ? w[i + 1] : 0.0;
    const double diff = w[i] - next;
    if (diff != 0.0) s += diff * proxy_topl(t[i], x, i + 1);
  }
  return s;
}

void check_weights(std::span<const double> w) {
  if (w.empty()) throw std::invalid_argument("weight vector is empty");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] >= 0.0)) throw std::invalid_argument("weights must be non-negative");
    if (i > 0 && w[i] > w[i - 1]) throw std::invalid_argument("weights must be non-increasing");
  }
}

double round_down_power(double v, double eps) {
  if (v <= 0.0) return 0.0;
  const double base = 1.0 + eps;
  double j = std::floor(std::log(v) / std::log(base));
  double r = std::pow(base, j);
  // Correct for log rounding in both directions.
  while (r > v) r = std::pow(base, --j);
  while (std::pow(base, j + 1) <= v) r = std::pow(base, ++j);
  return r;
}

std::vector<double> round_weights_down(std::span<const double> w, double eps) {
  check_weights(w);
  if (!(eps > 0.0)) throw std::invalid_argument("weight rounding: eps must be positive");
  const double w1 = w[0];
  std::vector<double> out(w.size(), 0.0);
  if (w1 == 0.0) return out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    out[i] = w1 * round_down_power(w[i] / w1, eps);
    // Exact powers survive the round trip; keep w_i itself when it is one.
    if (std::abs(out[i] - w[i]) <= 1e-12 * w1) out[i] = w[i];
    out[i] = std::min(out[i], w[i]);
  }
  return out;
}

std::vector<double> sparsify_weights(std::span<const double> w, double eps) {
  auto out = round_weights_down(w, eps);
  const double floor_value = w[0] * eps / static_cast<double>(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] < floor_value) out[i] = 0.0;
  return out;
}

std::size_t nonzero_blocks(std::span<const double> w) {
  std::size_t blocks = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) break;
    if (i == 0 || w[i] != w[i - 1]) ++blocks;
  }
  return blocks;
}

ThresholdCapExceeded::ThresholdCapExceeded(double count, double cap)
    : std::length_error("threshold enumeration would produce " +
                        std::to_string(static_cast<long long>(count)) +
                        " vectors, above the cap of " +
                        std::to_string(static_cast<long long>(cap))),
      count_(count) {}

std::vector<std::vector<double>> enumerate_thresholds(std::span<const double> wt,
                                                      std::span<const double> candidates,
                                                      double cap) {
  check_weights(wt);
  std::set<double, std::greater<>> uniq(candidates.begin(), candidates.end());
  uniq.insert(0.0);
  for (double c : uniq) {
    if (!(c >= 0.0)) throw std::invalid_argument("threshold candidates must be non-negative");
  }
  const std::vector<double> values(uniq.begin(), uniq.end());  // descending
  const std::size_t c = values.size();

  // Block end positions for the non-zero prefix of wt.
  std::vector<std::size_t> block_start;
  for (std::size_t i = 0; i < wt.size() && wt[i] != 0.0; ++i)
    if (i == 0 || wt[i] != wt[i - 1]) block_start.push_back(i);
  const std::size_t d = block_start.size();

  // Non-increasing d-tuples from c values: C(c + d - 1, d).
  double count = 1.0;
  for (std::size_t i = 1; i <= d; ++i)
    count = count * static_cast<double>(c - 1 + i) / static_cast<double>(i);
  count = std::round(count);
  if (count > cap) throw ThresholdCapExceeded(count, cap);

  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<std::size_t> pick(d, 0);  // indices into values, non-decreasing
  auto emit = [&] {
    std::vector<double> t(wt.size(), 0.0);
    for (std::size_t b = 0; b < d; ++b) {
      const std::size_t end = b + 1 < d ? block_start[b + 1] : wt.size();
      for (std::size_t i = block_start[b]; i < end && wt[i] != 0.0; ++i) t[i] = values[pick[b]];
    }
    out.push_back(std::move(t));
  };
  // Enumerate in lexicographic order of (pick[0], ..., pick[d-1]) from the
  // smallest thresholds upward.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t b, std::size_t lo) {
    if (b == d) {
      emit();
      return;
    }
    for (std::size_t v = lo; v < c; ++v) {
      pick[b] = v;
      rec(b + 1, v);
    }
  };
  rec(0, 0);
  // Ascending order reads more naturally: the all-zero vector first.
  std::reverse(out.begin(), out.end());
  return out;
}

ThresholdCost::ThresholdCost(std::vector<double> diffs, std::vector<double> thresholds)
    : diffs_(std::move(diffs)), thresholds_(std::move(thresholds)) {
  if (diffs_.size() != thresholds_.size())
    throw std::invalid_argument("ThresholdCost: diffs and thresholds differ in length");
}

ThresholdCost ThresholdCost::from_weights(std::span<const double> wt,
                                          std::span<const double> t) {
  if (wt.size() != t.size())
    throw std::invalid_argument("ThresholdCost: thresholds must match weight length");
  std::vector<double> diffs, ts;
  for (std::size_t i = 0; i < wt.size(); ++i) {
    const double diff = wt[i] - (i + 1 < wt.size() ? wt[i + 1] : 0.0);
    if (diff != 0.0) {
      diffs.push_back(diff);
      ts.push_back(t[i]);
    }
  }
  return ThresholdCost(std::move(diffs), std::move(ts));
}

double ThresholdCost::operator()(double a) const {
  double s = 0.0;
  for (std::size_t i = 0; i < diffs_.size(); ++i) s += diffs_[i] * dotdiv(a, thresholds_[i]);
  return s;
}

}  // namespace nestnorm
