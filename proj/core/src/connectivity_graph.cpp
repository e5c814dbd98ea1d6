#include <explore/connectivity_graph.hpp>

#include <explore/raycast.hpp>

#include <algorithm>
#include <cassert>
#include <functional>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace explore {

namespace {

const Vec3i kSteps[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

bool admissible(const VoxelGrid& grid, std::int32_t i, SearchMode mode) {
  switch (mode) {
    case SearchMode::FreeOnly:
      return grid.safe_free(i);
    case SearchMode::UnknownOnly:
      return grid.state(i) == VoxelState::Unknown;
    case SearchMode::Mixed:
      return grid.safe_free(i) || grid.state(i) == VoxelState::Unknown;
  }
  return false;
}

// Reusable search scratch, versioned so clears are O(1). One instance per
// thread; searches are read-only against the grid.
struct Scratch {
  std::vector<std::uint32_t> stamp;
  std::vector<double> g;
  std::vector<std::int32_t> parent;
  std::vector<std::uint8_t> closed;
  std::uint32_t epoch = 0;

  void prepare(std::size_t n) {
    if (stamp.size() < n) {
      stamp.assign(n, 0);
      g.resize(n);
      parent.resize(n);
      closed.resize(n);
      epoch = 0;
    }
    ++epoch;
  }
  bool fresh(std::int32_t i) const { return stamp[i] != epoch; }
  void touch(std::int32_t i) {
    stamp[i] = epoch;
    closed[i] = 0;
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

struct HeapNode {
  double f;
  double g;
  std::int32_t idx;
  bool operator>(const HeapNode& o) const {
    if (f != o.f) return f > o.f;
    if (g != o.g) return g < o.g;  // prefer deeper nodes on equal f
    return idx > o.idx;
  }
};

}  // namespace

std::optional<VoxelPath> restricted_astar(const VoxelGrid& grid, const Vec3& start,
                                          const Vec3& goal, const SearchRegion& region,
                                          SearchMode mode, double unknown_penalty,
                                          SearchStats* stats) {
  const Vec3i sv = grid.voxel_at(start);
  const Vec3i gv = grid.voxel_at(goal);
  if (!grid.in_bounds(sv) || !region.contains(sv) || !grid.in_bounds(gv) || !region.contains(gv))
    throw std::invalid_argument("restricted_astar endpoints outside search region");

  if (!admissible(grid, grid.linear(sv), mode) || !admissible(grid, grid.linear(gv), mode))
    return std::nullopt;

  const std::int32_t start_i = grid.linear(sv);
  const std::int32_t goal_i = grid.linear(gv);
  const double res = grid.resolution();
  auto heuristic = [&](const Vec3i& v) {
    return res * static_cast<double>((v - gv).cwiseAbs().sum());
  };

  if (start_i == goal_i) return VoxelPath{0.0, {sv}};

  Scratch& s = scratch();
  s.prepare(static_cast<std::size_t>(grid.voxel_count()));
  std::priority_queue<HeapNode, std::vector<HeapNode>, std::greater<HeapNode>> open;
  s.touch(start_i);
  s.g[start_i] = 0.0;
  s.parent[start_i] = -1;
  open.push({heuristic(sv), 0.0, start_i});

  while (!open.empty()) {
    const HeapNode node = open.top();
    open.pop();
    if (s.closed[node.idx] || node.g > s.g[node.idx]) continue;
    s.closed[node.idx] = 1;
    if (stats) ++stats->voxel_expansions;

    if (node.idx == goal_i) {
      VoxelPath path;
      path.cost = s.g[goal_i];
      for (std::int32_t i = goal_i; i != -1; i = s.parent[i]) path.voxels.push_back(grid.from_linear(i));
      std::reverse(path.voxels.begin(), path.voxels.end());
      return path;
    }

    const Vec3i v = grid.from_linear(node.idx);
    for (const Vec3i& d : kSteps) {
      const Vec3i n = v + d;
      if (!grid.in_bounds(n) || !region.contains(n)) continue;
      const std::int32_t ni = grid.linear(n);
      if (!admissible(grid, ni, mode)) continue;
      const bool into_unknown = grid.state(ni) == VoxelState::Unknown;
      const double step = res * (into_unknown && mode != SearchMode::FreeOnly ? unknown_penalty : 1.0);
      const double ng = node.g + step;
      if (s.fresh(ni) || ng < s.g[ni]) {
        s.touch(ni);
        s.g[ni] = ng;
        s.parent[ni] = node.idx;
        open.push({ng + heuristic(n), ng, ni});
      }
    }
  }
  return std::nullopt;
}

std::vector<Vec3> simplify_path(const VoxelGrid& grid, const std::vector<Vec3i>& voxels,
                                SearchMode mode) {
  std::vector<Vec3> pts;
  pts.reserve(voxels.size());
  for (const Vec3i& v : voxels) pts.push_back(grid.center_of(v));
  if (pts.size() <= 2) return pts;

  auto segment_clear = [&](const Vec3& a, const Vec3& b) {
    const double len = (b - a).norm();
    if (len < 1e-12) return true;
    const Vec3 dir = (b - a) / len;
    bool ok = true;
    walk_ray(a, dir, len, grid.origin(), grid.resolution(), grid.dims(),
             [&](const Vec3i& v, double) {
               if (!admissible(grid, grid.linear(v), mode)) {
                 ok = false;
                 return false;
               }
               return true;
             });
    return ok;
  };

  std::vector<Vec3> out;
  out.push_back(pts.front());
  std::size_t i = 0;
  while (i + 1 < pts.size()) {
    std::size_t j = pts.size() - 1;
    while (j > i + 1 && !segment_clear(pts[i], pts[j])) --j;
    out.push_back(pts[j]);
    i = j;
  }
  return out;
}

double polyline_length(const std::vector<Vec3>& polyline) {
  double len = 0;
  for (std::size_t i = 1; i < polyline.size(); ++i) len += (polyline[i] - polyline[i - 1]).norm();
  return len;
}

double penalized_length(const VoxelGrid& grid, const std::vector<Vec3>& polyline,
                        double unknown_penalty) {
  double total = 0;
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    const Vec3 a = polyline[i - 1], b = polyline[i];
    const double len = (b - a).norm();
    if (len < 1e-12) continue;
    const Vec3 dir = (b - a) / len;
    double prev_t = 0;
    std::int32_t prev_voxel = -1;
    walk_ray(a, dir, len, grid.origin(), grid.resolution(), grid.dims(),
             [&](const Vec3i& v, double t) {
               if (prev_voxel >= 0) {
                 const double w =
                     grid.state(prev_voxel) == VoxelState::Unknown ? unknown_penalty : 1.0;
                 total += w * (std::min(t, len) - prev_t);
               }
               prev_voxel = grid.linear(v);
               prev_t = t;
               return true;
             });
    if (prev_voxel >= 0) {
      const double w = grid.state(prev_voxel) == VoxelState::Unknown ? unknown_penalty : 1.0;
      total += w * (len - prev_t);
    }
  }
  return total;
}

void ConnectivityGraph::add_vertex(const Zone& z) {
  vertices_[z.id] = Vertex{z.cls, z.center, z.anchor, {}};
  pruned_.erase(z.id);
}

void ConnectivityGraph::remove_vertex(const ZoneId& id) {
  auto it = vertices_.find(id);
  if (it == vertices_.end()) return;
  const auto incident = it->second.incident;
  for (const auto& key : incident) remove_edge(key);
  vertices_.erase(it);
}

void ConnectivityGraph::add_edge(GraphEdge e) {
  const std::pair<ZoneId, ZoneId> key{std::min(e.a, e.b), std::max(e.a, e.b)};
  if (edges_.count(key)) return;
  vertices_.at(e.a).incident.push_back(key);
  vertices_.at(e.b).incident.push_back(key);
  edges_.emplace(key, std::move(e));
}

void ConnectivityGraph::remove_edge(const std::pair<ZoneId, ZoneId>& key) {
  auto it = edges_.find(key);
  if (it == edges_.end()) return;
  for (const ZoneId& end : {key.first, key.second}) {
    auto vit = vertices_.find(end);
    if (vit == vertices_.end()) continue;
    auto& inc = vit->second.incident;
    inc.erase(std::remove(inc.begin(), inc.end(), key), inc.end());
  }
  edges_.erase(it);
}

void ConnectivityGraph::update(const Decomposition& decomp, const VoxelGrid& grid,
                               const std::vector<int>& touched, SearchStats* stats) {
  std::vector<int> order(touched);
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  // Clear every touched cell before re-adding, so cross-cell edges between
  // two touched cells are rebuilt against fresh zones on both sides.
  for (int id : order) {
    std::vector<ZoneId> stale;
    for (const auto& [zid, v] : vertices_)
      if (zid.cell == id) stale.push_back(zid);
    for (const ZoneId& zid : stale) remove_vertex(zid);
    for (auto it = pruned_.begin(); it != pruned_.end();)
      it = (it->cell == id) ? pruned_.erase(it) : std::next(it);
  }
  for (int id : order)
    for (const Zone& z : decomp.cell(id).zones) add_vertex(z);

  auto search_pair = [&](const Zone& zm, const Zone& zn, const Cell& ci, const Cell& cj) {
    // Canonical direction: lower zone id first, so an incremental pass and a
    // full rebuild produce identical paths.
    const Zone& lo = zm.id < zn.id ? zm : zn;
    const Zone& hi = zm.id < zn.id ? zn : zm;
    const SearchMode mode =
        lo.cls == ZoneClass::Free ? SearchMode::FreeOnly : SearchMode::UnknownOnly;
    SearchRegion region;
    region.cells = {&ci, &cj};
    auto path = restricted_astar(grid, grid.center_of(lo.anchor), grid.center_of(hi.anchor),
                                 region, mode, unknown_penalty_, stats);
    if (!path) return;
    GraphEdge e;
    e.a = lo.id;
    e.b = hi.id;
    e.edge_class = lo.cls;
    e.weight = path->cost;
    e.path.reserve(path->voxels.size());
    for (const Vec3i& v : path->voxels) e.path.push_back(grid.center_of(v));
    if (!vertices_.count(e.a)) add_vertex(lo);
    if (!vertices_.count(e.b)) add_vertex(hi);
    add_edge(std::move(e));
  };

  for (int id : order) {
    const Cell& ci = decomp.cell(id);
    for (int nid : decomp.neighbor_cells(id)) {
      const Cell& cj = decomp.cell(nid);
      for (const Zone& zm : ci.zones)
        for (const Zone& zn : cj.zones) {
          if (zm.cls != zn.cls) continue;
          const std::pair<ZoneId, ZoneId> key{std::min(zm.id, zn.id), std::max(zm.id, zn.id)};
          if (edges_.count(key)) continue;
          search_pair(zm, zn, ci, cj);
        }
    }
    // Portal edges join free and unknown zones inside one cell; the search is
    // confined to that cell and may cross both voxel classes.
    for (const Zone& zf : ci.zones) {
      if (zf.cls != ZoneClass::Free) continue;
      for (const Zone& zu : ci.zones) {
        if (zu.cls != ZoneClass::Unknown) continue;
        SearchRegion region;
        region.cells = {&ci};
        auto path = restricted_astar(grid, grid.center_of(zf.anchor), grid.center_of(zu.anchor),
                                     region, SearchMode::Mixed, unknown_penalty_, stats);
        if (!path) continue;
        GraphEdge e;
        e.a = zf.id;
        e.b = zu.id;
        e.edge_class = ZoneClass::Free;
        e.portal = true;
        e.weight = path->cost;
        for (const Vec3i& v : path->voxels) e.path.push_back(grid.center_of(v));
        add_edge(std::move(e));
      }
    }
  }
}

std::vector<ZoneId> ConnectivityGraph::prune_hollows() {
  // Union-find over the vertex set; any component without a free vertex is a
  // sealed hollow and leaves planning.
  std::vector<ZoneId> ids;
  ids.reserve(vertices_.size());
  for (const auto& [zid, v] : vertices_) ids.push_back(zid);
  std::map<ZoneId, int> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = static_cast<int>(i);

  std::vector<int> parent(ids.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [key, e] : edges_) {
    const int a = find(index.at(key.first));
    const int b = find(index.at(key.second));
    if (a != b) parent[a] = b;
  }

  std::map<int, bool> has_free;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const int root = find(static_cast<int>(i));
    if (vertices_.at(ids[i]).cls == ZoneClass::Free) has_free[root] = true;
    else has_free.try_emplace(root, false);
  }

  std::vector<ZoneId> removed;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (!has_free[find(static_cast<int>(i))]) removed.push_back(ids[i]);
  for (const ZoneId& zid : removed) {
    remove_vertex(zid);
    pruned_.insert(zid);
  }
  return removed;
}

std::optional<ZoneId> ConnectivityGraph::snap(const VoxelGrid& grid, const Vec3& p,
                                              Subgraph subgraph) const {
  const Vec3i v = grid.voxel_at(p);
  std::optional<ZoneClass> want;
  if (subgraph == Subgraph::FreeOnly)
    want = ZoneClass::Free;
  else if (grid.in_bounds(v)) {
    if (grid.safe_free(v))
      want = ZoneClass::Free;
    else if (grid.state(v) == VoxelState::Unknown)
      want = ZoneClass::Unknown;
  }

  auto nearest = [&](std::optional<ZoneClass> cls) -> std::optional<ZoneId> {
    std::optional<ZoneId> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& [zid, vert] : vertices_) {
      if (cls && vert.cls != *cls) continue;
      const double d = (vert.pos - p).squaredNorm();
      if (d < best_d) {  // map order already breaks ties by lowest zone id
        best_d = d;
        best = zid;
      }
    }
    return best;
  };

  auto best = nearest(want);
  if (!best && subgraph == Subgraph::Full) best = nearest(std::nullopt);
  return best;
}

std::optional<GraphRoute> ConnectivityGraph::astar(const VoxelGrid& grid, const Vec3& a,
                                                   const Vec3& b, Subgraph subgraph,
                                                   SearchStats* stats) const {
  const auto va = snap(grid, a, subgraph);
  const auto vb = snap(grid, b, subgraph);
  if (!va || !vb) return std::nullopt;

  auto usable = [&](const GraphEdge& e) {
    if (subgraph == Subgraph::Full) return true;
    return e.edge_class == ZoneClass::Free && !e.portal;
  };

  std::map<ZoneId, double> g;
  std::map<ZoneId, std::pair<ZoneId, const GraphEdge*>> parent;
  std::set<ZoneId> closed;
  using QNode = std::pair<double, ZoneId>;
  std::priority_queue<QNode, std::vector<QNode>, std::greater<QNode>> open;
  const Vec3 goal_pos = vertices_.at(*vb).pos;
  g[*va] = 0.0;
  open.push({(vertices_.at(*va).pos - goal_pos).norm(), *va});

  std::optional<double> found;
  while (!open.empty()) {
    const auto [f, zid] = open.top();
    open.pop();
    if (closed.count(zid)) continue;
    closed.insert(zid);
    const double gz = g.at(zid);
    if (stats) ++stats->graph_expansions;
    if (zid == *vb) {
      found = gz;
      break;
    }
    for (const auto& key : vertices_.at(zid).incident) {
      const GraphEdge& e = edges_.at(key);
      if (!usable(e)) continue;
      const ZoneId next = key.first == zid ? key.second : key.first;
      const double ng = gz + e.weight;
      auto it = g.find(next);
      if (it == g.end() || ng < it->second) {
        g[next] = ng;
        parent[next] = {zid, &e};
        open.push({ng + (vertices_.at(next).pos - goal_pos).norm(), next});
      }
    }
  }
  if (!found) return std::nullopt;

  std::vector<ZoneId> chain{*vb};
  while (chain.back() != *va) chain.push_back(parent.at(chain.back()).first);
  std::reverse(chain.begin(), chain.end());

  GraphRoute route;
  route.vertices = chain;
  route.polyline.push_back(a);
  route.polyline.push_back(vertices_.at(*va).pos);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const GraphEdge* e = parent.at(chain[i]).second;
    const bool forward = e->a == chain[i - 1];
    if (forward)
      for (std::size_t k = 1; k < e->path.size(); ++k) route.polyline.push_back(e->path[k]);
    else
      for (std::size_t k = e->path.size() - 1; k-- > 0;) route.polyline.push_back(e->path[k]);
  }
  route.polyline.push_back(b);
  route.cost = (a - vertices_.at(*va).pos).norm() + *found + (b - goal_pos).norm();
  return route;
}

std::optional<HybridPath> ConnectivityGraph::hybrid_distance(const VoxelGrid& grid, const Vec3& p0,
                                                             const Vec3& pn,
                                                             double distance_threshold,
                                                             SearchStats* stats) const {
  if ((p0 - pn).norm() < distance_threshold) {
    auto path = restricted_astar(grid, p0, pn, SearchRegion{}, SearchMode::Mixed, unknown_penalty_,
                                 stats);
    if (!path) return std::nullopt;
    HybridPath out;
    out.polyline = simplify_path(grid, path->voxels, SearchMode::Mixed);
    out.cost = penalized_length(grid, out.polyline, unknown_penalty_);
    out.via_graph = false;
    return out;
  }
  auto route = astar(grid, p0, pn, Subgraph::Full, stats);
  if (!route) return std::nullopt;
  HybridPath out;
  out.cost = route->cost;
  out.polyline = std::move(route->polyline);
  out.via_graph = true;
  return out;
}

void ConnectivityGraph::dump(std::ostream& os) const {
  for (const auto& [zid, v] : vertices_)
    os << "v " << zid.cell << '.' << zid.label << ' ' << (v.cls == ZoneClass::Free ? 'F' : 'U')
       << ' ' << v.pos.x() << ' ' << v.pos.y() << ' ' << v.pos.z() << '\n';
  for (const auto& [key, e] : edges_) {
    const char type = e.portal ? 'P' : (e.edge_class == ZoneClass::Free ? 'F' : 'U');
    os << "e " << type << ' ' << e.a.cell << '.' << e.a.label << ' ' << e.b.cell << '.'
       << e.b.label << ' ' << e.weight << '\n';
  }
}

}  // namespace explore
