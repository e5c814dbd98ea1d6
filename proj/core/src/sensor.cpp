#include <explore/sensor.hpp>

#include <explore/raycast.hpp>
#include <explore/voxel_grid.hpp>

#include <stdexcept>

namespace explore {

void SensorModel::validate() const {
  if (hfov_deg <= 0 || hfov_deg >= 180 || vfov_deg <= 0 || vfov_deg >= 180)
    throw std::invalid_argument("sensor FoV must lie in (0, 180) degrees");
  if (max_depth <= 0) throw std::invalid_argument("sensor depth must be positive");
  if (rays_h < 2 || rays_v < 2) throw std::invalid_argument("sensor needs at least a 2x2 ray grid");
}

DepthScan render_scan(const VoxelGrid& truth, const Vec3& position, double yaw,
                      const SensorModel& model) {
  model.validate();
  const Vec3i pose_voxel = truth.voxel_at(position);
  if (!truth.in_bounds(pose_voxel)) throw std::invalid_argument("sensor pose outside grid");
  if (truth.state(pose_voxel) == VoxelState::Occupied)
    throw std::runtime_error("sensor pose inside an occupied voxel");

  const double hfov = model.hfov_deg * M_PI / 180.0;
  const double vfov = model.vfov_deg * M_PI / 180.0;

  DepthScan scan;
  scan.position = position;
  scan.yaw = yaw;
  scan.max_depth = model.max_depth;
  scan.rays.reserve(static_cast<std::size_t>(model.rays_h) * model.rays_v);

  for (int iv = 0; iv < model.rays_v; ++iv) {
    const double el = -vfov / 2 + (iv + 0.5) * vfov / model.rays_v;
    for (int ih = 0; ih < model.rays_h; ++ih) {
      const double az = yaw - hfov / 2 + (ih + 0.5) * hfov / model.rays_h;
      DepthScan::Ray ray;
      ray.dir = {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
      walk_ray(position, ray.dir, model.max_depth, truth.origin(), truth.resolution(),
               truth.dims(), [&](const Vec3i& v, double t) {
                 if (truth.state(v) == VoxelState::Occupied) {
                   ray.hit = t;
                   return false;
                 }
                 return true;
               });
      scan.rays.push_back(std::move(ray));
    }
  }
  return scan;
}

}  // namespace explore
