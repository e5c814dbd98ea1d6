#pragma once

#include <explore/types.hpp>

#include <string>
#include <vector>

namespace explore {

struct DepthScan;

// Inclusive axis-aligned voxel-index box. Default-constructed boxes are empty.
struct UpdateBBox {
  Vec3i lo{0, 0, 0};
  Vec3i hi{-1, -1, -1};

  bool empty() const { return hi.x() < lo.x() || hi.y() < lo.y() || hi.z() < lo.z(); }

  void expand(const Vec3i& v) {
    if (empty()) {
      lo = hi = v;
      return;
    }
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }

  void merge(const UpdateBBox& other) {
    if (other.empty()) return;
    expand(other.lo);
    expand(other.hi);
  }

  bool contains(const Vec3i& v) const {
    return !empty() && (v.array() >= lo.array()).all() && (v.array() <= hi.array()).all();
  }

  // Intersection against a [lo, hi) half-open box (cell bounds convention).
  bool intersects_half_open(const Vec3i& box_lo, const Vec3i& box_hi) const {
    if (empty()) return false;
    for (int a = 0; a < 3; ++a)
      if (hi[a] < box_lo[a] || lo[a] >= box_hi[a]) return false;
    return true;
  }

  UpdateBBox dilated(int r, const Vec3i& dims) const {
    if (empty()) return {};
    UpdateBBox d;
    d.lo = (lo.array() - r).max(0).matrix();
    d.hi = (hi.array() + r).min(dims.array() - 1).matrix();
    return d;
  }
};

// Ternary occupancy grid over the bounded exploration space, with a safety
// label on free voxels. Binary deterministic updates: a voxel observed
// occupied stays occupied.
//
// Single writer: one scan integration at a time. Read-only queries are safe
// between integrations.
class VoxelGrid {
 public:
  VoxelGrid(const Vec3& origin, double resolution, const Vec3i& dims, double safety_clearance);

  const Vec3& origin() const { return origin_; }
  double resolution() const { return res_; }
  const Vec3i& dims() const { return dims_; }
  double safety_clearance() const { return clearance_; }
  std::int64_t voxel_count() const { return static_cast<std::int64_t>(states_.size()); }

  bool in_bounds(const Vec3i& v) const {
    return (v.array() >= 0).all() && (v.array() < dims_.array()).all();
  }
  bool in_bounds(const Vec3& p) const { return in_bounds(voxel_at(p)); }

  std::int32_t linear(const Vec3i& v) const {
    return (v.x() * dims_.y() + v.y()) * dims_.z() + v.z();
  }
  Vec3i from_linear(std::int32_t i) const {
    const int z = i % dims_.z();
    const int y = (i / dims_.z()) % dims_.y();
    const int x = i / (dims_.z() * dims_.y());
    return {x, y, z};
  }

  Vec3i voxel_at(const Vec3& p) const {
    Vec3i v;
    for (int a = 0; a < 3; ++a) v[a] = static_cast<int>(std::floor((p[a] - origin_[a]) / res_));
    return v;
  }
  Vec3 center_of(const Vec3i& v) const {
    return origin_ + (v.cast<double>() + Vec3::Constant(0.5)) * res_;
  }
  Vec3 center_of(std::int32_t i) const { return center_of(from_linear(i)); }

  VoxelState state(std::int32_t i) const { return states_[i]; }
  VoxelState state(const Vec3i& v) const { return states_[linear(v)]; }
  SafetyClass safety(std::int32_t i) const { return safety_[i]; }
  SafetyClass safety(const Vec3i& v) const { return safety_[linear(v)]; }
  bool safe_free(std::int32_t i) const { return safety_[i] == SafetyClass::SafeFree; }
  bool safe_free(const Vec3i& v) const { return safe_free(linear(v)); }

  // Direct state writes for building ground-truth grids and tests. Safety
  // labels are not maintained; call classify_safety_full() afterwards.
  void set_state(const Vec3i& v, VoxelState s) { states_[linear(v)] = s; }
  void fill(VoxelState s);

  // Casts every ray of the scan into the grid: traversed voxels strictly
  // before the hit become Free, the hit voxel Occupied. Occupied voxels are
  // never downgraded. Returns the tight bounding box of changed voxels and
  // refreshes safety labels around it.
  UpdateBBox integrate_scan(const DepthScan& scan);

  // Recomputes safety labels for every free voxel in `region` dilated by
  // ceil(clearance / res). A free voxel is SafeFree iff no occupied voxel
  // center lies strictly closer than the clearance.
  void classify_safety(const UpdateBBox& region);
  void classify_safety_full();

  // Volume (m^3) of SafeFree voxels reachable from `start` by 6-connected
  // flood fill. Throws if the start voxel is not SafeFree.
  double accessible_volume(const Vec3& start) const;

  // Linear indices of the reachable SafeFree set (same flood fill).
  std::vector<std::int32_t> reachable_safe_free(const Vec3& start) const;

  std::int64_t count_state(VoxelState s) const;

  // Snapshot format: "voxgrid v1 <nx> <ny> <nz> <res> <ox> <oy> <oz>\n"
  // followed by nx*ny*nz row-major bytes {0=Unknown,1=Free,2=Occupied}.
  void save(const std::string& path) const;
  static VoxelGrid load(const std::string& path, double safety_clearance);

 private:
  Vec3 origin_;
  double res_;
  Vec3i dims_;
  double clearance_;
  std::vector<VoxelState> states_;
  std::vector<SafetyClass> safety_;

  // Offsets within the clearance ball, shared by the scatter pass.
  std::vector<Vec3i> unsafe_offsets_;
  void build_offsets();
};

}  // namespace explore
