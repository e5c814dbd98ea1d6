#include <explore/voxel_grid.hpp>

#include <explore/raycast.hpp>
#include <explore/sensor.hpp>

#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace explore {

VoxelGrid::VoxelGrid(const Vec3& origin, double resolution, const Vec3i& dims,
                     double safety_clearance)
    : origin_(origin), res_(resolution), dims_(dims), clearance_(safety_clearance) {
  if (resolution <= 0) throw std::invalid_argument("voxel resolution must be positive");
  if ((dims.array() <= 0).any()) throw std::invalid_argument("voxel dims must be positive");
  const std::size_t n = static_cast<std::size_t>(dims.x()) * dims.y() * dims.z();
  states_.assign(n, VoxelState::Unknown);
  safety_.assign(n, SafetyClass::NotApplicable);
  build_offsets();
}

void VoxelGrid::build_offsets() {
  unsafe_offsets_.clear();
  const int r = static_cast<int>(std::ceil(clearance_ / res_));
  for (int dx = -r; dx <= r; ++dx)
    for (int dy = -r; dy <= r; ++dy)
      for (int dz = -r; dz <= r; ++dz) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        const double d = res_ * std::sqrt(double(dx * dx + dy * dy + dz * dz));
        if (d < clearance_ - 1e-12) unsafe_offsets_.push_back({dx, dy, dz});
      }
}

void VoxelGrid::fill(VoxelState s) {
  std::fill(states_.begin(), states_.end(), s);
  std::fill(safety_.begin(), safety_.end(), SafetyClass::NotApplicable);
}

UpdateBBox VoxelGrid::integrate_scan(const DepthScan& scan) {
  if (!in_bounds(scan.position)) throw std::invalid_argument("scan pose outside grid");

  UpdateBBox changed;
  const double tol = 1e-9 * res_;
  for (const auto& ray : scan.rays) {
    const double reach = ray.hit ? *ray.hit : scan.max_depth;
    walk_ray(scan.position, ray.dir, reach, origin_, res_, dims_, [&](const Vec3i& v, double t) {
      const std::int32_t i = linear(v);
      if (ray.hit && t >= *ray.hit - tol) {
        if (states_[i] != VoxelState::Occupied) {
          states_[i] = VoxelState::Occupied;
          safety_[i] = SafetyClass::NotApplicable;
          changed.expand(v);
        }
        return false;  // hit voxel ends the ray
      }
      if (states_[i] == VoxelState::Unknown) {
        states_[i] = VoxelState::Free;
        changed.expand(v);
      }
      return true;
    });
  }

  if (!changed.empty()) classify_safety(changed);
  return changed;
}

void VoxelGrid::classify_safety(const UpdateBBox& region) {
  if (region.empty()) return;
  const int r = static_cast<int>(std::ceil(clearance_ / res_));
  const UpdateBBox target = region.dilated(r, dims_);

  for (int x = target.lo.x(); x <= target.hi.x(); ++x)
    for (int y = target.lo.y(); y <= target.hi.y(); ++y)
      for (int z = target.lo.z(); z <= target.hi.z(); ++z) {
        const std::int32_t i = linear({x, y, z});
        safety_[i] =
            states_[i] == VoxelState::Free ? SafetyClass::SafeFree : SafetyClass::NotApplicable;
      }

  // Occupied voxels up to one clearance radius outside the target box can
  // still shadow free voxels inside it.
  const UpdateBBox source = region.dilated(2 * r, dims_);
  for (int x = source.lo.x(); x <= source.hi.x(); ++x)
    for (int y = source.lo.y(); y <= source.hi.y(); ++y)
      for (int z = source.lo.z(); z <= source.hi.z(); ++z) {
        const Vec3i c{x, y, z};
        if (states_[linear(c)] != VoxelState::Occupied) continue;
        for (const Vec3i& off : unsafe_offsets_) {
          const Vec3i v = c + off;
          if (!target.contains(v)) continue;
          const std::int32_t i = linear(v);
          if (states_[i] == VoxelState::Free) safety_[i] = SafetyClass::UnsafeFree;
        }
      }
}

void VoxelGrid::classify_safety_full() {
  UpdateBBox all;
  all.lo = {0, 0, 0};
  all.hi = dims_ - Vec3i::Ones();
  classify_safety(all);
}

std::vector<std::int32_t> VoxelGrid::reachable_safe_free(const Vec3& start) const {
  const Vec3i sv = voxel_at(start);
  if (!in_bounds(sv)) throw std::invalid_argument("start outside grid");
  if (!safe_free(sv)) throw std::invalid_argument("start voxel is not SafeFree");

  std::vector<std::int32_t> out;
  std::vector<std::uint8_t> seen(states_.size(), 0);
  std::deque<Vec3i> queue{sv};
  seen[linear(sv)] = 1;
  static const Vec3i kSteps[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                  {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  while (!queue.empty()) {
    const Vec3i v = queue.front();
    queue.pop_front();
    out.push_back(linear(v));
    for (const Vec3i& s : kSteps) {
      const Vec3i n = v + s;
      if (!in_bounds(n)) continue;
      const std::int32_t i = linear(n);
      if (seen[i] || !safe_free(i)) continue;
      seen[i] = 1;
      queue.push_back(n);
    }
  }
  return out;
}

double VoxelGrid::accessible_volume(const Vec3& start) const {
  const double vox = res_ * res_ * res_;
  return vox * static_cast<double>(reachable_safe_free(start).size());
}

std::int64_t VoxelGrid::count_state(VoxelState s) const {
  std::int64_t n = 0;
  for (VoxelState v : states_)
    if (v == s) ++n;
  return n;
}

void VoxelGrid::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  char header[256];
  std::snprintf(header, sizeof(header), "voxgrid v1 %d %d %d %.17g %.17g %.17g %.17g\n",
                dims_.x(), dims_.y(), dims_.z(), res_, origin_.x(), origin_.y(), origin_.z());
  out << header;
  out.write(reinterpret_cast<const char*>(states_.data()),
            static_cast<std::streamsize>(states_.size()));
}

VoxelGrid VoxelGrid::load(const std::string& path, double safety_clearance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(in, line);
  std::istringstream hs(line);
  std::string magic, version;
  Vec3i dims;
  double res;
  Vec3 origin;
  hs >> magic >> version >> dims.x() >> dims.y() >> dims.z() >> res >> origin.x() >> origin.y() >>
      origin.z();
  if (magic != "voxgrid" || version != "v1" || !hs)
    throw std::runtime_error(path + ": not a voxgrid v1 snapshot");

  VoxelGrid grid(origin, res, dims, safety_clearance);
  in.read(reinterpret_cast<char*>(grid.states_.data()),
          static_cast<std::streamsize>(grid.states_.size()));
  if (in.gcount() != static_cast<std::streamsize>(grid.states_.size()))
    throw std::runtime_error(path + ": truncated voxel payload");
  grid.classify_safety_full();
  return grid;
}

}  // namespace explore
