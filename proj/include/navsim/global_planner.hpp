#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "navsim/costmap.hpp"
#include "navsim/kinematics.hpp"

namespace navsim {

struct GridPath {
  std::vector<std::pair<int, int>> cells;  // (col, row), start to goal
  std::vector<Pose> world_poses;           // cell centers, headings along path
  // Integer traversal cost: sum over edges of len * (253 + penalty*cost)
  // with len in milli-cells. Identical for any two optimal planners,
  // which keeps oracle comparisons exact.
  std::int64_t total_cost_units = 0;
  double total_cost = 0.0;  // meters-equivalent, derived from the units
};

struct PlannerConfig {
  double cost_penalty = 6.0;  // extra weight per unit of cell cost
  int decimate = 1;           // keep every k-th world pose (+ endpoints)
};

/// 8-connected A* over the costmap. Diagonal moves require both
/// adjacent orthogonal cells to be traversable (no corner cutting).
/// Cells with cost >= 254 are untraversable. Returns nullopt when the
/// goal is unreachable or an endpoint is blocked.
std::optional<GridPath> astar(const CostMap& cm, const Pose& start,
                              const Pose& goal, const PlannerConfig& cfg = {});

/// Same search with a zero heuristic; the brute-force oracle for astar.
std::optional<GridPath> dijkstra(const CostMap& cm, const Pose& start,
                                 const Pose& goal,
                                 const PlannerConfig& cfg = {});

/// Cell-center poses for a cell path; heading of pose i points at cell
/// i+1, the final heading repeats. decimate keeps every k-th pose plus
/// both endpoints.
std::vector<Pose> to_world_path(const std::vector<std::pair<int, int>>& cells,
                                const CostMap& cm, int decimate = 1);

}  // namespace navsim
