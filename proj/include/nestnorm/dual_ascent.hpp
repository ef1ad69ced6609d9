#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "nestnorm/metric.hpp"

namespace nestnorm {

inline constexpr double kNever = std::numeric_limits<double>::infinity();

// One candidate ball of the primal-dual scheme. Client p pays
// (alpha_p -. offset[p]) towards the ball; kNever means p never pays.
// A fixed ball is open from time zero and only freezes the clients reaching it.
struct AscentBall {
  FacilityId facility = 0;
  double radius = 0.0;
  double threshold = 0.0;
  bool fixed = false;
  std::vector<double> offset;
};

struct AscentResult {
  std::vector<double> alpha;
  std::vector<bool> tight;
  std::vector<double> tight_time;
  std::vector<std::size_t> frozen_by;  // ball that stopped each client
  bool all_frozen = true;              // false if some client can never stop

  // Payment of client p to ball b at the end of the ascent.
  double payment(std::span<const AscentBall> balls, std::size_t b, std::size_t p) const {
    return dotdiv(alpha[p], balls[b].offset[p]);
  }
};

// Event-driven dual ascent: every active alpha grows at unit rate; a ball turns
// tight once its payments reach its threshold, and every active client that has
// reached a tight ball stops. Simultaneous events go in (facility, radius) order.
AscentResult run_dual_ascent(std::span<const AscentBall> balls, std::size_t num_points);

}  // namespace nestnorm
