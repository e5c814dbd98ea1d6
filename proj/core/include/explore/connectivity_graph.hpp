#pragma once

#include <explore/decomposition.hpp>
#include <explore/types.hpp>
#include <explore/voxel_grid.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace explore {

enum class SearchMode : std::uint8_t { FreeOnly, UnknownOnly, Mixed };

// Cumulative work counters, used both for profiling and for the simulator's
// deterministic planning-latency model.
struct SearchStats {
  std::int64_t voxel_expansions = 0;
  std::int64_t graph_expansions = 0;

  SearchStats& operator+=(const SearchStats& o) {
    voxel_expansions += o.voxel_expansions;
    graph_expansions += o.graph_expansions;
    return *this;
  }
};

struct VoxelPath {
  double cost = 0.0;               // penalized length (m); unknown steps weighted
  std::vector<Vec3i> voxels;       // start..goal inclusive
};

// Restriction to a set of cell bounds; empty means the whole grid.
struct SearchRegion {
  std::vector<const Cell*> cells;

  bool contains(const Vec3i& v) const {
    if (cells.empty()) return true;
    for (const Cell* c : cells)
      if ((v.array() >= c->lo.array()).all() && (v.array() < c->hi.array()).all()) return true;
    return false;
  }
};

// Shortest 6-connected voxel path confined to `region`. FreeOnly traverses
// SafeFree voxels, UnknownOnly traverses Unknown voxels, Mixed traverses
// both with steps into unknown voxels weighted by `unknown_penalty`.
// Deterministic: ties broken on higher g, then lower voxel index. Throws if
// start or goal lies outside the region; returns nullopt when disconnected.
std::optional<VoxelPath> restricted_astar(const VoxelGrid& grid, const Vec3& start,
                                          const Vec3& goal, const SearchRegion& region,
                                          SearchMode mode, double unknown_penalty,
                                          SearchStats* stats = nullptr);

// Greedy line-of-sight shortcutting of a voxel path; every surviving segment
// traverses only mode-admissible voxels.
std::vector<Vec3> simplify_path(const VoxelGrid& grid, const std::vector<Vec3i>& voxels,
                                SearchMode mode);

// Penalized length of a polyline: per-voxel segment lengths, weighted by the
// unknown penalty inside unknown voxels.
double penalized_length(const VoxelGrid& grid, const std::vector<Vec3>& polyline,
                        double unknown_penalty);

double polyline_length(const std::vector<Vec3>& polyline);

struct GraphEdge {
  ZoneId a, b;  // a < b except portal edges, which run free -> unknown
  ZoneClass edge_class;  // Free / Unknown; portals flagged separately
  bool portal = false;
  double weight = 0.0;          // penalized path length (m)
  std::vector<Vec3> path;       // voxel-center polyline a -> b
};

struct GraphRoute {
  double cost = 0.0;            // snap distances + edge weights
  std::vector<Vec3> polyline;   // query point to query point
  std::vector<ZoneId> vertices;
};

struct HybridPath {
  double cost = 0.0;            // penalized meters
  std::vector<Vec3> polyline;
  bool via_graph = false;
};

// Zone-center graph over the decomposition: free and unknown subgraphs plus
// portal edges linking them inside partially explored cells. Maintained
// incrementally from the set of re-decomposed cells; after any update
// sequence it matches a from-scratch rebuild.
class ConnectivityGraph {
 public:
  struct Vertex {
    ZoneClass cls;
    Vec3 pos;
    Vec3i anchor;
    std::vector<std::pair<ZoneId, ZoneId>> incident;  // edge keys
  };

  explicit ConnectivityGraph(double unknown_penalty) : unknown_penalty_(unknown_penalty) {}

  double unknown_penalty() const { return unknown_penalty_; }
  const std::map<ZoneId, Vertex>& vertices() const { return vertices_; }
  const std::map<std::pair<ZoneId, ZoneId>, GraphEdge>& edges() const { return edges_; }
  bool pruned(const ZoneId& z) const { return pruned_.count(z) > 0; }

  // Re-links the touched cells: their old vertices and incident edges are
  // dropped, fresh vertices added for every zone, and the three restricted
  // search types rebuild free, unknown and portal edges against all six
  // neighbor cells.
  void update(const Decomposition& decomp, const VoxelGrid& grid, const std::vector<int>& touched,
              SearchStats* stats = nullptr);

  // Removes connected components that contain no free vertex; such zones are
  // unreachable hollows. Returns the removed zone ids in ascending order.
  std::vector<ZoneId> prune_hollows();

  // Shortest route between the vertices nearest to a and b (Euclidean snap
  // among class-matching vertices), plus straight-line snap distances at both
  // ends. FreeOnly restricts to the free subgraph.
  enum class Subgraph : std::uint8_t { Full, FreeOnly };
  std::optional<GraphRoute> astar(const VoxelGrid& grid, const Vec3& a, const Vec3& b,
                                  Subgraph subgraph, SearchStats* stats = nullptr) const;

  // Cost-evaluation path search: voxel-based below the distance threshold,
  // graph-based beyond it. nullopt when unreachable either way.
  std::optional<HybridPath> hybrid_distance(const VoxelGrid& grid, const Vec3& p0, const Vec3& pn,
                                            double distance_threshold,
                                            SearchStats* stats = nullptr) const;

  void dump(std::ostream& os) const;

 private:
  double unknown_penalty_;
  std::map<ZoneId, Vertex> vertices_;
  std::map<std::pair<ZoneId, ZoneId>, GraphEdge> edges_;
  std::set<ZoneId> pruned_;

  void add_vertex(const Zone& z);
  void remove_vertex(const ZoneId& id);
  void add_edge(GraphEdge e);
  void remove_edge(const std::pair<ZoneId, ZoneId>& key);
  std::optional<ZoneId> snap(const VoxelGrid& grid, const Vec3& p, Subgraph subgraph) const;
};

}  // namespace explore
