#pragma once

#include <explore/atsp.hpp>
#include <explore/connectivity_graph.hpp>
#include <explore/decomposition.hpp>
#include <explore/frontier.hpp>
#include <explore/motion_time.hpp>
#include <explore/types.hpp>

#include <optional>
#include <vector>

namespace explore {

enum class TargetKind : std::uint8_t { ViewpointCenter, ZoneCenter };

struct Target {
  ZoneId zone;
  TargetKind kind;
  Vec3 position;
};

// Global planning inputs: the agent pose plus one entry per active free zone
// (its viewpoint center) and per live unknown zone (its zone center). An
// active free zone is a free zone holding at least one viewpoint
// representative.
struct TargetSet {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double yaw = 0.0;
  std::vector<Target> targets;
};

enum class TargetFilter : std::uint8_t { All, ActiveFreeOnly, UnknownOnly };

// Representatives grouped by the free zone that holds them.
struct ZoneViewpoints {
  ZoneId zone;
  std::vector<std::pair<int, Viewpoint>> reps;  // cluster id, representative
};

std::vector<ZoneViewpoints> group_representatives(const Decomposition& decomp,
                                                  const VoxelGrid& grid,
                                                  const FrontierStore& frontiers);

TargetSet build_target_set(const Vec3& position, const Vec3& velocity, double yaw,
                           const Decomposition& decomp, const VoxelGrid& grid,
                           const ConnectivityGraph& graph,
                           const std::vector<ZoneViewpoints>& active,
                           TargetFilter filter = TargetFilter::All);

// Asymmetric traversal-time matrix over {agent} + targets. Row/column 0 is
// the agent; column 0 is identically zero so an open tour from the agent and
// a closed tour cost the same. Entries are path_time() over the hybrid
// search path; rows leaving the agent seed the model with its actual
// velocity. Unreachable pairs are +inf.
struct CoverageCostMatrix {
  CostMatrix matrix;
  std::vector<std::vector<Vec3>> pair_paths;  // canonical i<j polylines, index i*n+j
};

struct PlannerTuning {
  double distance_threshold = 10.0;  // m; voxel search below, graph search above
  int atsp_exact_threshold = 13;
  int sop_exact_threshold = 12;
};

CoverageCostMatrix build_cost_matrix(const TargetSet& targets, const ConnectivityGraph& graph,
                                     const VoxelGrid& grid, const MotionLimits& limits,
                                     const PlannerTuning& tuning, SearchStats* stats = nullptr);

// Open-loop visitation order over the targets, starting at the agent.
// Targets unreachable from the agent are left out of the order and reported.
struct CoveragePath {
  std::vector<int> order;        // target indices (0-based into TargetSet)
  double cost = 0.0;
  std::vector<int> unreachable;  // target indices excluded from the tour
};

CoveragePath plan_coverage_path(const CoverageCostMatrix& matrix, const PlannerTuning& tuning,
                                std::int64_t* solver_states = nullptr);

}  // namespace explore
