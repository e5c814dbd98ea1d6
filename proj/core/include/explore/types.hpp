#pragma once

#include <Eigen/Core>

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>

namespace explore {

using Vec3 = Eigen::Vector3d;
using Vec3i = Eigen::Vector3i;

enum class VoxelState : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

// Safety label of a free voxel: SafeFree iff the nearest occupied voxel
// center is at least the configured clearance away. Non-free voxels carry
// NotApplicable.
enum class SafetyClass : std::uint8_t { NotApplicable = 0, SafeFree = 1, UnsafeFree = 2 };

enum class ZoneClass : std::uint8_t { Free = 0, Unknown = 1 };

// Zones are keyed per cell so re-decomposing one cell never collides with
// ids owned by another.
struct ZoneId {
  std::int32_t cell = -1;
  std::int32_t label = -1;

  friend auto operator<=>(const ZoneId&, const ZoneId&) = default;
};

inline double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0) a += 2.0 * M_PI;
  return a - M_PI;
}

// Absolute yaw separation in [0, pi].
inline double yaw_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

}  // namespace explore

template <>
struct std::hash<explore::ZoneId> {
  std::size_t operator()(const explore::ZoneId& z) const noexcept {
    return (static_cast<std::size_t>(static_cast<std::uint32_t>(z.cell)) << 32) |
           static_cast<std::uint32_t>(z.label);
  }
};
