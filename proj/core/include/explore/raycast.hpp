#pragma once

#include <explore/types.hpp>

#include <cmath>
#include <limits>

namespace explore {

// Voxel-walking line traversal (Amanatides & Woo). Visits every voxel the ray
// enters, in order, as visit(voxel_index, entry_distance). The voxel holding
// the origin is visited with entry distance 0. Traversal stops when the
// visitor returns false, the ray exits the grid, or the next entry distance
// exceeds max_dist.
//
// Ties at voxel corners are broken by nudging the ray origin by 1e-6 * res on
// every axis; the sensor and the map integrator must both walk through this
// function so their traversals agree bit-for-bit.
template <class Visitor>
void walk_ray(const Vec3& origin, const Vec3& dir, double max_dist,
              const Vec3& grid_origin, double res, const Vec3i& dims, Visitor&& visit) {
  const double nudge = 1e-6 * res;
  Vec3 o = origin + Vec3::Constant(nudge);

  Vec3i v;
  for (int a = 0; a < 3; ++a) v[a] = static_cast<int>(std::floor((o[a] - grid_origin[a]) / res));
  for (int a = 0; a < 3; ++a)
    if (v[a] < 0 || v[a] >= dims[a]) return;

  Vec3i step;
  Vec3 t_max, t_delta;
  for (int a = 0; a < 3; ++a) {
    if (dir[a] > 0) {
      step[a] = 1;
      const double boundary = grid_origin[a] + (v[a] + 1) * res;
      t_max[a] = (boundary - o[a]) / dir[a];
      t_delta[a] = res / dir[a];
    } else if (dir[a] < 0) {
      step[a] = -1;
      const double boundary = grid_origin[a] + v[a] * res;
      t_max[a] = (boundary - o[a]) / dir[a];
      t_delta[a] = -res / dir[a];
    } else {
      step[a] = 0;
      t_max[a] = std::numeric_limits<double>::infinity();
      t_delta[a] = std::numeric_limits<double>::infinity();
    }
  }

  double t_entry = 0.0;
  while (true) {
    if (!visit(v, t_entry)) return;
    int axis = 0;
    if (t_max[1] < t_max[0]) axis = 1;
    if (t_max[2] < t_max[axis]) axis = 2;
    t_entry = t_max[axis];
    if (t_entry > max_dist) return;
    v[axis] += step[axis];
    if (v[axis] < 0 || v[axis] >= dims[axis]) return;
    t_max[axis] += t_delta[axis];
  }
}

}  // namespace explore
