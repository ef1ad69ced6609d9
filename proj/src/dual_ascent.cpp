#include "nestnorm/dual_ascent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace nestnorm {

namespace {

struct Event {
  double time;
  int kind;  // 0: client reaches an open ball, 1: ball may turn tight
  FacilityId facility;
  double radius;
  std::size_t ball;
  std::size_t point;

  auto key() const { return std::tie(time, kind, facility, radius, ball, point); }
  bool operator>(const Event& o) const { return key() > o.key(); }
};

class Ascent {
 public:
  Ascent(std::span<const AscentBall> balls, std::size_t n) : balls_(balls), n_(n) {
    res_.alpha.assign(n, 0.0);
    res_.tight.assign(balls.size(), false);
    res_.tight_time.assign(balls.size(), kNever);
    res_.frozen_by.assign(n, balls.size());
    active_.assign(n, true);
    paid_frozen_.assign(balls.size(), 0.0);
    order_.resize(balls.size());
    for (std::size_t b = 0; b < balls.size(); ++b) {
      if (balls[b].offset.size() != n)
        throw std::invalid_argument("ascent ball offsets must cover every client");
      auto& ord = order_[b];
      for (std::size_t p = 0; p < n; ++p)
        if (balls[b].offset[p] != kNever) ord.push_back(p);
      std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t c) {
        return balls[b].offset[a] < balls[b].offset[c];
      });
    }
  }

  AscentResult run() {
    for (std::size_t b = 0; b < balls_.size(); ++b) {
      if (balls_[b].fixed) {
        open_ball(b, 0.0);
      } else {
        push_tight(b, 0.0);
      }
    }
    while (active_count_ > 0 && !queue_.empty()) {
      const Event e = queue_.top();
      queue_.pop();
      if (e.kind == 0) {
        if (active_[e.point]) freeze(e.point, e.time, e.ball);
        continue;
      }
      if (res_.tight[e.ball]) continue;
      const double t = tight_time(e.ball, e.time);
      if (t > e.time + tol(e.ball)) {
        if (t != kNever) queue_.push(make_tight_event(e.ball, t));
        continue;
      }
      open_ball(e.ball, e.time);
    }
    res_.all_frozen = active_count_ == 0;
    return std::move(res_);
  }

 private:
  double tol(std::size_t b) const { return 1e-12 * (1.0 + std::abs(balls_[b].threshold)); }

  Event make_tight_event(std::size_t b, double t) const {
    return Event{t, 1, balls_[b].facility, balls_[b].radius, b, 0};
  }

  void push_tight(std::size_t b, double now) {
    const double t = tight_time(b, now);
    if (t != kNever) queue_.push(make_tight_event(b, t));
  }

  // Earliest time >= now at which the payments to b reach its threshold,
  // assuming the current set of active clients.
  double tight_time(std::size_t b, double now) const {
    const auto& ball = balls_[b];
    const auto& ord = order_[b];
    double count = 0.0, offsets = 0.0;
    std::size_t j = 0;
    for (; j < ord.size() && ball.offset[ord[j]] <= now; ++j) {
      if (!active_[ord[j]]) continue;
      count += 1.0;
      offsets += ball.offset[ord[j]];
    }
    const double need = ball.threshold - paid_frozen_[b];
    if (count * now - offsets >= need - tol(b)) return now;
    while (true) {
      while (j < ord.size() && !active_[ord[j]]) ++j;
      const double next = j < ord.size() ? ball.offset[ord[j]] : kNever;
      if (count > 0.0) {
        const double t = (need + offsets) / count;
        if (t <= next) return std::max(t, now);
      }
      if (next == kNever) return kNever;
      count += 1.0;
      offsets += next;
      ++j;
    }
  }

  void open_ball(std::size_t b, double now) {
    res_.tight[b] = true;
    res_.tight_time[b] = now;
    const auto& ball = balls_[b];
    for (std::size_t p : order_[b]) {
      if (!active_[p]) continue;
      if (ball.offset[p] <= now) {
        freeze(p, now, b);
      } else {
        queue_.push(Event{ball.offset[p], 0, ball.facility, ball.radius, b, p});
      }
    }
  }

  void freeze(std::size_t p, double now, std::size_t by) {
    active_[p] = false;
    --active_count_;
    res_.alpha[p] = now;
    res_.frozen_by[p] = by;
    for (std::size_t b = 0; b < balls_.size(); ++b) {
      if (res_.tight[b]) continue;
      paid_frozen_[b] += dotdiv(now, balls_[b].offset[p]);
    }
  }

  std::span<const AscentBall> balls_;
  std::size_t n_;
  AscentResult res_;
  std::vector<bool> active_;
  std::size_t active_count_ = n_;
  std::vector<double> paid_frozen_;
  std::vector<std::vector<std::size_t>> order_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
};

}  // namespace

AscentResult run_dual_ascent(std::span<const AscentBall> balls, std::size_t num_points) {
  return Ascent(balls, num_points).run();
}

}  // namespace nestnorm
