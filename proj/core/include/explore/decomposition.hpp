#pragma once

#include <explore/types.hpp>
#include <explore/voxel_grid.hpp>

#include <iosfwd>
#include <vector>

namespace explore {

// One connected component of same-class voxels inside a cell. `center` is the
// center of an in-zone voxel: the mean voxel position rectified to the nearest
// member voxel. Under uniform (connectivity-blind) decomposition the center is
// the raw per-class centroid and `anchor` keeps the rectified voxel used to
// seed path searches.
struct Zone {
  ZoneId id;
  ZoneClass cls = ZoneClass::Free;
  std::vector<std::int32_t> voxels;
  Vec3 center = Vec3::Zero();
  Vec3i anchor = Vec3i::Zero();  // in-zone voxel nearest the raw centroid
};

// Uniform coarse partition unit; bounds are voxel indices, [lo, hi).
struct Cell {
  std::int32_t id = -1;
  Vec3i lo = Vec3i::Zero();
  Vec3i hi = Vec3i::Zero();
  std::vector<Zone> zones;
};

enum class DecompositionMode : std::uint8_t {
  Connectivity,  // connected-component zones over SafeFree / Unknown voxels
  Uniform,       // one free + one unknown centroid per cell, connectivity-blind
};

// Coarse-to-fine space partition: uniform cells sized to the sensor range,
// refined per map update into connectivity-labeled zones.
class Decomposition {
 public:
  Decomposition(const VoxelGrid& grid, double cell_size,
                DecompositionMode mode = DecompositionMode::Connectivity);

  double cell_size() const { return cell_size_; }
  const Vec3i& cell_counts() const { return counts_; }
  int cell_count() const { return static_cast<int>(cells_.size()); }
  const Cell& cell(int id) const { return cells_[id]; }
  const std::vector<Cell>& cells() const { return cells_; }
  DecompositionMode mode() const { return mode_; }

  int cell_of_voxel(const Vec3i& v) const;
  std::vector<int> cells_intersecting(const UpdateBBox& bbox) const;

  // Neighbor cell ids in fixed -x,+x,-y,+y,-z,+z order (in-bounds only).
  std::vector<int> neighbor_cells(int id) const;

  // Re-decomposes exactly the cells intersecting the bounding box; returns
  // their ids in ascending order.
  std::vector<int> update(const VoxelGrid& grid, const UpdateBBox& bbox);
  void decompose_all(const VoxelGrid& grid);

  // Connected components of SafeFree voxels plus connected components of
  // Unknown voxels within the cell, 6-connectivity.
  std::vector<Zone> decompose_cell(const VoxelGrid& grid, int cell_id) const;

  const Zone* find_zone(const ZoneId& id) const;
  const Zone* zone_containing(const VoxelGrid& grid, const Vec3& p) const;
  // Label of the zone containing a voxel within its cell, or -1.
  std::int32_t label_of_voxel(const VoxelGrid& grid, const Vec3i& v) const;

  void dump(std::ostream& os) const;

 private:
  double cell_size_;
  Vec3i counts_;
  std::vector<Cell> cells_;
  DecompositionMode mode_;
  int span_;  // cell edge in voxels (interior cells)

  std::vector<Zone> label_connectivity(const VoxelGrid& grid, const Cell& c) const;
  std::vector<Zone> label_uniform(const VoxelGrid& grid, const Cell& c) const;
};

// Nearest member voxel to a point, ties broken by lowest linear index.
std::int32_t nearest_voxel_in(const VoxelGrid& grid, const std::vector<std::int32_t>& voxels,
                              const Vec3& p);

}  // namespace explore
