#include <explore/decomposition.hpp>

#include <algorithm>
#include <deque>
#include <ostream>
#include <stdexcept>

namespace explore {

namespace {
const Vec3i kSteps[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

std::int32_t nearest_voxel_in(const VoxelGrid& grid, const std::vector<std::int32_t>& voxels,
                              const Vec3& p) {
  std::int32_t best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::int32_t i : voxels) {
    const double d = (grid.center_of(i) - p).squaredNorm();
    if (d < best_d || (d == best_d && i < best)) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

Decomposition::Decomposition(const VoxelGrid& grid, double cell_size, DecompositionMode mode)
    : cell_size_(cell_size), mode_(mode) {
  if (cell_size <= 0) throw std::invalid_argument("cell size must be positive");
  span_ = std::max(1, static_cast<int>(std::lround(cell_size / grid.resolution())));
  for (int a = 0; a < 3; ++a)
    counts_[a] = (grid.dims()[a] + span_ - 1) / span_;

  cells_.reserve(static_cast<std::size_t>(counts_.x()) * counts_.y() * counts_.z());
  for (int cx = 0; cx < counts_.x(); ++cx)
    for (int cy = 0; cy < counts_.y(); ++cy)
      for (int cz = 0; cz < counts_.z(); ++cz) {
        Cell c;
        c.id = static_cast<std::int32_t>(cells_.size());
        c.lo = {cx * span_, cy * span_, cz * span_};
        c.hi = c.lo + Vec3i::Constant(span_);
        c.hi = c.hi.cwiseMin(grid.dims());  // boundary cells clipped
        cells_.push_back(std::move(c));
      }
}

int Decomposition::cell_of_voxel(const Vec3i& v) const {
  const int cx = v.x() / span_, cy = v.y() / span_, cz = v.z() / span_;
  return (cx * counts_.y() + cy) * counts_.z() + cz;
}

std::vector<int> Decomposition::cells_intersecting(const UpdateBBox& bbox) const {
  std::vector<int> out;
  if (bbox.empty()) return out;
  const Vec3i clo = bbox.lo / span_;
  const Vec3i chi = bbox.hi / span_;
  for (int cx = clo.x(); cx <= chi.x(); ++cx)
    for (int cy = clo.y(); cy <= chi.y(); ++cy)
      for (int cz = clo.z(); cz <= chi.z(); ++cz)
        out.push_back((cx * counts_.y() + cy) * counts_.z() + cz);
  return out;
}

std::vector<int> Decomposition::neighbor_cells(int id) const {
  const int cz = id % counts_.z();
  const int cy = (id / counts_.z()) % counts_.y();
  const int cx = id / (counts_.z() * counts_.y());
  std::vector<int> out;
  for (const Vec3i& s : kSteps) {
    const int nx = cx + s.x(), ny = cy + s.y(), nz = cz + s.z();
    if (nx < 0 || nx >= counts_.x() || ny < 0 || ny >= counts_.y() || nz < 0 || nz >= counts_.z())
      continue;
    out.push_back((nx * counts_.y() + ny) * counts_.z() + nz);
  }
  return out;
}

std::vector<int> Decomposition::update(const VoxelGrid& grid, const UpdateBBox& bbox) {
  std::vector<int> touched = cells_intersecting(bbox);
  for (int id : touched) cells_[id].zones = decompose_cell(grid, id);
  return touched;
}

void Decomposition::decompose_all(const VoxelGrid& grid) {
  for (Cell& c : cells_) c.zones = decompose_cell(grid, c.id);
}

std::vector<Zone> Decomposition::decompose_cell(const VoxelGrid& grid, int cell_id) const {
  const Cell& c = cells_[cell_id];
  return mode_ == DecompositionMode::Connectivity ? label_connectivity(grid, c)
                                                  : label_uniform(grid, c);
}

std::vector<Zone> Decomposition::label_connectivity(const VoxelGrid& grid, const Cell& c) const {
  std::vector<Zone> zones;
  std::vector<std::uint8_t> seen(
      static_cast<std::size_t>((c.hi - c.lo).x()) * (c.hi - c.lo).y() * (c.hi - c.lo).z(), 0);
  const Vec3i ext = c.hi - c.lo;
  auto local = [&](const Vec3i& v) {
    const Vec3i l = v - c.lo;
    return (l.x() * ext.y() + l.y()) * ext.z() + l.z();
  };
  auto labelable = [&](const Vec3i& v, ZoneClass cls) {
    if (cls == ZoneClass::Unknown) return grid.state(v) == VoxelState::Unknown;
    return grid.safe_free(v);
  };

  for (int x = c.lo.x(); x < c.hi.x(); ++x)
    for (int y = c.lo.y(); y < c.hi.y(); ++y)
      for (int z = c.lo.z(); z < c.hi.z(); ++z) {
        const Vec3i v{x, y, z};
        if (seen[local(v)]) continue;
        ZoneClass cls;
        if (grid.safe_free(v))
          cls = ZoneClass::Free;
        else if (grid.state(v) == VoxelState::Unknown)
          cls = ZoneClass::Unknown;
        else
          continue;  // occupied and unsafe-free voxels are omitted

        Zone zone;
        zone.id = {c.id, static_cast<std::int32_t>(zones.size())};
        zone.cls = cls;
        std::deque<Vec3i> queue{v};
        seen[local(v)] = 1;
        Vec3 sum = Vec3::Zero();
        while (!queue.empty()) {
          const Vec3i u = queue.front();
          queue.pop_front();
          zone.voxels.push_back(grid.linear(u));
          sum += grid.center_of(u);
          for (const Vec3i& s : kSteps) {
            const Vec3i n = u + s;
            if ((n.array() < c.lo.array()).any() || (n.array() >= c.hi.array()).any()) continue;
            if (seen[local(n)] || !labelable(n, cls)) continue;
            seen[local(n)] = 1;
            queue.push_back(n);
          }
        }
        std::sort(zone.voxels.begin(), zone.voxels.end());
        const Vec3 mean = sum / static_cast<double>(zone.voxels.size());
        const std::int32_t nearest = nearest_voxel_in(grid, zone.voxels, mean);
        zone.anchor = grid.from_linear(nearest);
        zone.center = grid.center_of(nearest);
        zones.push_back(std::move(zone));
      }
  return zones;
}

std::vector<Zone> Decomposition::label_uniform(const VoxelGrid& grid, const Cell& c) const {
  // Connectivity-blind clustering: all safe-free voxels of the cell form one
  // zone and all unknown voxels another, centered on the raw (unrectified)
  // centroid. Path searches still need a traversable seed, kept in `anchor`.
  Zone free_zone, unknown_zone;
  Vec3 free_sum = Vec3::Zero(), unknown_sum = Vec3::Zero();
  for (int x = c.lo.x(); x < c.hi.x(); ++x)
    for (int y = c.lo.y(); y < c.hi.y(); ++y)
      for (int z = c.lo.z(); z < c.hi.z(); ++z) {
        const Vec3i v{x, y, z};
        if (grid.safe_free(v)) {
          free_zone.voxels.push_back(grid.linear(v));
          free_sum += grid.center_of(v);
        } else if (grid.state(v) == VoxelState::Unknown) {
          unknown_zone.voxels.push_back(grid.linear(v));
          unknown_sum += grid.center_of(v);
        }
      }

  std::vector<Zone> zones;
  auto finish = [&](Zone& z, ZoneClass cls, const Vec3& sum) {
    if (z.voxels.empty()) return;
    z.id = {c.id, static_cast<std::int32_t>(zones.size())};
    z.cls = cls;
    z.center = sum / static_cast<double>(z.voxels.size());
    z.anchor = grid.from_linear(nearest_voxel_in(grid, z.voxels, z.center));
    zones.push_back(std::move(z));
  };
  finish(free_zone, ZoneClass::Free, free_sum);
  finish(unknown_zone, ZoneClass::Unknown, unknown_sum);
  return zones;
}

const Zone* Decomposition::find_zone(const ZoneId& id) const {
  if (id.cell < 0 || id.cell >= cell_count()) return nullptr;
  const auto& zones = cells_[id.cell].zones;
  if (id.label < 0 || id.label >= static_cast<std::int32_t>(zones.size())) return nullptr;
  return &zones[id.label];
}

std::int32_t Decomposition::label_of_voxel(const VoxelGrid& grid, const Vec3i& v) const {
  const std::int32_t lin = grid.linear(v);
  const Cell& c = cells_[cell_of_voxel(v)];
  for (const Zone& z : c.zones)
    if (std::binary_search(z.voxels.begin(), z.voxels.end(), lin)) return z.id.label;
  return -1;
}

const Zone* Decomposition::zone_containing(const VoxelGrid& grid, const Vec3& p) const {
  const Vec3i v = grid.voxel_at(p);
  if (!grid.in_bounds(v)) return nullptr;
  const std::int32_t label = label_of_voxel(grid, v);
  if (label < 0) return nullptr;
  return &cells_[cell_of_voxel(v)].zones[label];
}

void Decomposition::dump(std::ostream& os) const {
  for (const Cell& c : cells_)
    for (const Zone& z : c.zones)
      os << "cell " << c.id << ": zone " << z.id.label << " class "
         << (z.cls == ZoneClass::Free ? 'F' : 'U') << " center " << z.center.x() << ' '
         << z.center.y() << ' ' << z.center.z() << " nvox " << z.voxels.size() << '\n';
}

}  // namespace explore
