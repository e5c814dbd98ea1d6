#pragma once

#include <explore/sensor.hpp>
#include <explore/types.hpp>
#include <explore/voxel_grid.hpp>

#include <map>
#include <vector>

namespace explore {

struct Viewpoint {
  Vec3 position = Vec3::Zero();  // SafeFree voxel
  double yaw = 0.0;              // facing the cluster centroid
  int frontier_cover = 0;        // cluster voxels visible from here
  int unknown_count = 0;         // unknown voxels hit by the FoV ray samples
  bool qualified = false;
};

// Cluster of frontier voxels: free voxels with at least one unknown
// 6-neighbor. Oversized clusters are split along their principal axis.
struct FrontierCluster {
  int id = -1;
  std::vector<std::int32_t> voxels;
  Vec3 centroid = Vec3::Zero();
  Vec3i bbox_lo, bbox_hi;  // inclusive
  std::vector<Viewpoint> viewpoints;
  int representative = -1;  // index into viewpoints, -1 while dormant
};

struct FrontierParams {
  double cluster_max_extent = 2.5;            // m, per axis, before splitting
  std::vector<double> ring_radii = {1.5, 2.5, 3.5};
  int ring_azimuths = 12;
  int coverage_rays_h = 16;                   // ray fan for unknown counting
  int coverage_rays_v = 12;
  std::size_t min_cluster_voxels = 1;
  double ring_phase = 0.0;                    // seed-driven azimuth offset
};

bool is_frontier_voxel(const VoxelGrid& grid, const Vec3i& v);

// Incremental frontier store. Clusters whose voxels fall inside the update
// region are dissolved and regrown; everything else is untouched. The owned
// voxel set always equals a full-map frontier scan.
class FrontierStore {
 public:
  explicit FrontierStore(const VoxelGrid& grid);

  const std::map<int, FrontierCluster>& clusters() const { return clusters_; }
  bool empty() const { return clusters_.empty(); }

  // Returns ids of clusters created by this update. `removed` collects the
  // dissolved ids when non-null.
  std::vector<int> update(const VoxelGrid& grid, const UpdateBBox& bbox,
                          const FrontierParams& params, std::vector<int>* removed = nullptr);

  // Candidate viewpoints on cylindrical rings around the centroid, facing it;
  // only SafeFree positions are kept. frontier_cover counts cluster voxels
  // with an in-FoV, occlusion-free line of sight; unknown_count counts the
  // distinct unknown voxels crossed by a truncated ray fan.
  void sample_viewpoints(const VoxelGrid& grid, FrontierCluster& cluster,
                         const SensorModel& sensor, const FrontierParams& params);

  // Pooled qualification over every stored viewpoint: a viewpoint survives iff
  // its unknown count reaches mean - z * stddev of the pool.
  void qualify_all(double z_score);

  // Argmax of frontier_cover over qualified viewpoints; ties prefer the
  // candidate closer to the centroid, then the lower index. Returns the
  // representative index or -1.
  static int select_representative(FrontierCluster& cluster);

  FrontierCluster* find(int id);

 private:
  std::map<int, FrontierCluster> clusters_;
  int next_id_ = 0;
  std::vector<std::int32_t> owner_;        // voxel -> cluster id, -1 unowned
  std::vector<std::uint32_t> visit_stamp_;  // scratch for unknown counting
  std::uint32_t visit_epoch_ = 0;

  void adopt(const VoxelGrid& grid, FrontierCluster&& cluster, const FrontierParams& params,
             std::vector<int>* created);
  int count_unknown_in_fov(const VoxelGrid& grid, const Vec3& pos, double yaw,
                           const SensorModel& sensor, const FrontierParams& params);
};

}  // namespace explore
