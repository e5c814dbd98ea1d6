#include <explore/motion_time.hpp>

#include <cmath>
#include <stdexcept>

namespace explore {

double segment_time(double length, double v_hat, const MotionLimits& limits) {
  if (!std::isfinite(length) || !std::isfinite(v_hat))
    throw std::invalid_argument("segment_time: non-finite input");
  if (length < 0 || limits.v_max <= 0 || limits.a_max <= 0)
    throw std::invalid_argument("segment_time: invalid length or limits");

  const double v = std::clamp(v_hat, -limits.v_max, limits.v_max);
  const double speed_gap = limits.v_max - std::abs(v);
  double t = length / limits.v_max + speed_gap * speed_gap / (2.0 * limits.v_max * limits.a_max);
  if (v >= 0.0) {
    // H(-v) = 0 for v > 0; at v == 0 the reversal term vanishes anyway.
  } else {
    t += 2.0 * std::abs(v) / limits.a_max;
  }
  return t;
}

double path_time(std::span<const Vec3> points, const std::optional<Vec3>& v0,
                 const MotionLimits& limits) {
  if (points.size() < 2) return 0.0;

  double total = 0.0;
  Vec3 prev_dir = Vec3::Zero();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Vec3 seg = points[i + 1] - points[i];
    const double len = seg.norm();
    if (len < 1e-12) throw std::invalid_argument("path_time: degenerate segment");
    const Vec3 dir = seg / len;

    double v_hat;
    if (i == 0)
      v_hat = v0 ? v0->dot(dir) : limits.v_max;
    else
      v_hat = limits.v_max * prev_dir.dot(dir);
    total += segment_time(len, v_hat, limits);
    prev_dir = dir;
  }
  return total;
}

double yaw_time(double yaw_diff, const MotionLimits& limits) {
  const double d = std::abs(wrap_angle(yaw_diff));
  if (d < 1e-12) return 0.0;
  const double rate = limits.yaw_rate_max, acc = limits.yaw_acc_max;
  if (d >= rate * rate / acc) return d / rate + rate / acc;
  return 2.0 * std::sqrt(d / acc);
}

}  // namespace explore
