#pragma once

#include <explore/types.hpp>

#include <optional>
#include <vector>

namespace explore {

class VoxelGrid;

// Forward-looking depth sensor modeled as a viewing frustum: horizontal and
// vertical field of view plus a maximum sensing depth. Rays form a uniform
// angular grid.
struct SensorModel {
  double hfov_deg = 80.0;
  double vfov_deg = 60.0;
  double max_depth = 5.0;
  int rays_h = 80;
  int rays_v = 60;

  void validate() const;
};

struct DepthScan {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
  double max_depth = 0.0;

  struct Ray {
    Vec3 dir;                   // unit, world frame
    std::optional<double> hit;  // distance to first occupied voxel, if any
  };
  std::vector<Ray> rays;
};

// Casts the sensor's ray grid against a ground-truth grid. Deterministic for a
// fixed pose and model. Throws if the pose is outside the grid or inside an
// occupied voxel.
DepthScan render_scan(const VoxelGrid& truth, const Vec3& position, double yaw,
                      const SensorModel& model);

}  // namespace explore
