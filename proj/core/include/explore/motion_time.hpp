#pragma once

#include <explore/types.hpp>

#include <optional>
#include <span>

namespace explore {

struct MotionLimits {
  double v_max = 2.0;        // m/s
  double a_max = 3.0;        // m/s^2
  double yaw_rate_max = 1.57;  // rad/s
  double yaw_acc_max = 1.57;   // rad/s^2
};

// Traversal time of one path segment under the uniformly accelerated model:
//   t = l / v_max + (v_max - |v|)^2 / (2 v_max a_max) + 2 |v| / a_max * H(-v)
// where v is the signed projection of the entry velocity onto the segment and
// H is the Heaviside step (0 for negative arguments, 1 otherwise).
double segment_time(double length, double v_hat, const MotionLimits& limits);

// Sums segment_time over a polyline. The velocity entering segment i points
// along segment i-1 at full speed; the first segment uses `v0` when given
// (the agent's actual velocity when leaving its current position) and
// otherwise assumes full speed along itself.
double path_time(std::span<const Vec3> points, const std::optional<Vec3>& v0,
                 const MotionLimits& limits);

// Minimum-time yaw rotation from rest through `yaw_diff` (wrapped to [0, pi]):
// trapezoidal profile when the rate limit is reached, triangular otherwise.
double yaw_time(double yaw_diff, const MotionLimits& limits);

}  // namespace explore
