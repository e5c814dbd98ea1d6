#include <explore/frontier.hpp>

#include <explore/raycast.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace explore {

namespace {
const Vec3i kSteps[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

bool is_frontier_voxel(const VoxelGrid& grid, const Vec3i& v) {
  if (grid.state(v) != VoxelState::Free) return false;
  for (const Vec3i& s : kSteps) {
    const Vec3i n = v + s;
    if (grid.in_bounds(n) && grid.state(n) == VoxelState::Unknown) return true;
  }
  return false;
}

FrontierStore::FrontierStore(const VoxelGrid& grid)
    : owner_(static_cast<std::size_t>(grid.voxel_count()), -1),
      visit_stamp_(static_cast<std::size_t>(grid.voxel_count()), 0) {}

std::vector<int> FrontierStore::update(const VoxelGrid& grid, const UpdateBBox& bbox,
                                       const FrontierParams& params, std::vector<int>* removed) {
  std::vector<int> created;
  if (bbox.empty()) return created;

  // Frontier status depends on the voxel and its 6-neighbors, so one extra
  // shell around the update box covers every voxel whose status can change.
  const UpdateBBox region = bbox.dilated(1, grid.dims());

  std::set<int> dissolved;
  for (int x = region.lo.x(); x <= region.hi.x(); ++x)
    for (int y = region.lo.y(); y <= region.hi.y(); ++y)
      for (int z = region.lo.z(); z <= region.hi.z(); ++z) {
        const std::int32_t owner = owner_[grid.linear({x, y, z})];
        if (owner >= 0) dissolved.insert(owner);
      }

  std::vector<std::int32_t> seeds;
  for (int id : dissolved) {
    auto it = clusters_.find(id);
    for (std::int32_t v : it->second.voxels) {
      owner_[v] = -1;
      seeds.push_back(v);  // may still be frontier voxels outside the region
    }
    clusters_.erase(it);
    if (removed) removed->push_back(id);
  }
  for (int x = region.lo.x(); x <= region.hi.x(); ++x)
    for (int y = region.lo.y(); y <= region.hi.y(); ++y)
      for (int z = region.lo.z(); z <= region.hi.z(); ++z)
        seeds.push_back(grid.linear({x, y, z}));
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  for (std::int32_t seed : seeds) {
    if (owner_[seed] >= 0) continue;
    const Vec3i sv = grid.from_linear(seed);
    if (!is_frontier_voxel(grid, sv)) continue;

    // Region-grow a fresh cluster; growth stops at voxels owned by surviving
    // clusters so their partitions stay untouched.
    FrontierCluster cluster;
    std::deque<Vec3i> queue{sv};
    owner_[seed] = next_id_;  // provisional; adopt() assigns real ids on split
    while (!queue.empty()) {
      const Vec3i v = queue.front();
      queue.pop_front();
      cluster.voxels.push_back(grid.linear(v));
      for (const Vec3i& s : kSteps) {
        const Vec3i n = v + s;
        if (!grid.in_bounds(n)) continue;
        const std::int32_t ni = grid.linear(n);
        if (owner_[ni] >= 0 || !is_frontier_voxel(grid, n)) continue;
        owner_[ni] = next_id_;
        queue.push_back(n);
      }
    }
    if (cluster.voxels.size() < params.min_cluster_voxels) {
      for (std::int32_t v : cluster.voxels) owner_[v] = -1;
      continue;
    }
    adopt(grid, std::move(cluster), params, &created);
  }
  return created;
}

void FrontierStore::adopt(const VoxelGrid& grid, FrontierCluster&& cluster,
                          const FrontierParams& params, std::vector<int>* created) {
  std::sort(cluster.voxels.begin(), cluster.voxels.end());
  Vec3 sum = Vec3::Zero();
  UpdateBBox box;
  for (std::int32_t v : cluster.voxels) {
    sum += grid.center_of(v);
    box.expand(grid.from_linear(v));
  }
  cluster.centroid = sum / static_cast<double>(cluster.voxels.size());
  cluster.bbox_lo = box.lo;
  cluster.bbox_hi = box.hi;

  const Vec3 extent = (box.hi - box.lo + Vec3i::Ones()).cast<double>() * grid.resolution();
  if (extent.maxCoeff() > params.cluster_max_extent && cluster.voxels.size() > 1) {
    // Split along the principal axis at the centroid.
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (std::int32_t v : cluster.voxels) {
      const Vec3 d = grid.center_of(v) - cluster.centroid;
      cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    const Vec3 axis = eig.eigenvectors().col(2);  // largest eigenvalue

    FrontierCluster left, right;
    for (std::int32_t v : cluster.voxels)
      ((grid.center_of(v) - cluster.centroid).dot(axis) <= 0 ? left : right)
          .voxels.push_back(v);
    if (!left.voxels.empty() && !right.voxels.empty()) {
      adopt(grid, std::move(left), params, created);
      adopt(grid, std::move(right), params, created);
      return;
    }
  }

  cluster.id = next_id_++;
  for (std::int32_t v : cluster.voxels) owner_[v] = cluster.id;
  if (created) created->push_back(cluster.id);
  clusters_.emplace(cluster.id, std::move(cluster));
}

namespace {

bool in_fov(const Vec3& from, double yaw, const Vec3& to, const SensorModel& sensor) {
  const Vec3 rel = to - from;
  const double dist = rel.norm();
  if (dist > sensor.max_depth || dist < 1e-9) return dist < 1e-9;
  const double az = std::atan2(rel.y(), rel.x());
  if (yaw_distance(az, yaw) > sensor.hfov_deg * M_PI / 360.0) return false;
  const double el = std::atan2(rel.z(), std::hypot(rel.x(), rel.y()));
  return std::abs(el) <= sensor.vfov_deg * M_PI / 360.0;
}

bool line_of_sight(const VoxelGrid& grid, const Vec3& from, const Vec3& to) {
  const double len = (to - from).norm();
  if (len < 1e-12) return true;
  const Vec3 dir = (to - from) / len;
  bool clear = true;
  walk_ray(from, dir, len, grid.origin(), grid.resolution(), grid.dims(),
           [&](const Vec3i& v, double) {
             if (grid.state(v) != VoxelState::Free) {
               clear = false;
               return false;
             }
             return true;
           });
  return clear;
}

}  // namespace

int FrontierStore::count_unknown_in_fov(const VoxelGrid& grid, const Vec3& pos, double yaw,
                                        const SensorModel& sensor, const FrontierParams& params) {
  ++visit_epoch_;
  const double hfov = sensor.hfov_deg * M_PI / 180.0;
  const double vfov = sensor.vfov_deg * M_PI / 180.0;
  int count = 0;
  for (int iv = 0; iv < params.coverage_rays_v; ++iv) {
    const double el = -vfov / 2 + (iv + 0.5) * vfov / params.coverage_rays_v;
    for (int ih = 0; ih < params.coverage_rays_h; ++ih) {
      const double az = yaw - hfov / 2 + (ih + 0.5) * hfov / params.coverage_rays_h;
      const Vec3 dir{std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
      walk_ray(pos, dir, sensor.max_depth, grid.origin(), grid.resolution(), grid.dims(),
               [&](const Vec3i& v, double) {
                 const std::int32_t i = grid.linear(v);
                 if (grid.state(i) == VoxelState::Occupied) return false;
                 if (grid.state(i) == VoxelState::Unknown && visit_stamp_[i] != visit_epoch_) {
                   visit_stamp_[i] = visit_epoch_;
                   ++count;
                 }
                 return true;
               });
    }
  }
  return count;
}

void FrontierStore::sample_viewpoints(const VoxelGrid& grid, FrontierCluster& cluster,
                                      const SensorModel& sensor, const FrontierParams& params) {
  cluster.viewpoints.clear();
  cluster.representative = -1;
  for (double radius : params.ring_radii) {
    if (radius > sensor.max_depth) continue;
    for (int k = 0; k < params.ring_azimuths; ++k) {
      const double az = params.ring_phase + 2.0 * M_PI * k / params.ring_azimuths;
      Viewpoint vp;
      vp.position = cluster.centroid + Vec3(radius * std::cos(az), radius * std::sin(az), 0.0);
      const Vec3i voxel = grid.voxel_at(vp.position);
      if (!grid.in_bounds(voxel) || !grid.safe_free(voxel)) continue;
      vp.yaw = std::atan2(cluster.centroid.y() - vp.position.y(),
                          cluster.centroid.x() - vp.position.x());
      for (std::int32_t fv : cluster.voxels) {
        const Vec3 target = grid.center_of(fv);
        if (in_fov(vp.position, vp.yaw, target, sensor) &&
            line_of_sight(grid, vp.position, target))
          ++vp.frontier_cover;
      }
      vp.unknown_count = count_unknown_in_fov(grid, vp.position, vp.yaw, sensor, params);
      cluster.viewpoints.push_back(std::move(vp));
    }
  }
}

void FrontierStore::qualify_all(double z_score) {
  std::vector<Viewpoint*> pool;
  for (auto& [id, cluster] : clusters_)
    for (Viewpoint& vp : cluster.viewpoints) pool.push_back(&vp);
  if (pool.empty()) return;

  double mean = 0;
  for (const Viewpoint* vp : pool) mean += vp->unknown_count;
  mean /= static_cast<double>(pool.size());
  double var = 0;
  for (const Viewpoint* vp : pool) {
    const double d = vp->unknown_count - mean;
    var += d * d;
  }
  var /= static_cast<double>(pool.size());
  const double cutoff = mean - z_score * std::sqrt(var);

  for (Viewpoint* vp : pool) vp->qualified = vp->unknown_count >= cutoff;
  for (auto& [id, cluster] : clusters_) select_representative(cluster);
}

int FrontierStore::select_representative(FrontierCluster& cluster) {
  int best = -1;
  double best_dist = 0;
  for (int i = 0; i < static_cast<int>(cluster.viewpoints.size()); ++i) {
    const Viewpoint& vp = cluster.viewpoints[i];
    if (!vp.qualified) continue;
    const double dist = (vp.position - cluster.centroid).norm();
    if (best < 0 || vp.frontier_cover > cluster.viewpoints[best].frontier_cover ||
        (vp.frontier_cover == cluster.viewpoints[best].frontier_cover && dist < best_dist)) {
      best = i;
      best_dist = dist;
    }
  }
  cluster.representative = best;
  return best;
}

FrontierCluster* FrontierStore::find(int id) {
  auto it = clusters_.find(id);
  return it == clusters_.end() ? nullptr : &it->second;
}

}  // namespace explore
