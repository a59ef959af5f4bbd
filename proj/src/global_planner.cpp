#include "navsim/global_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace navsim {
namespace {

// Step lengths in milli-cells.
constexpr std::int64_t kStraight = 1000;
constexpr std::int64_t kDiagonal = 1414;  // < 1000*sqrt(2), keeps h admissible
constexpr std::int64_t kBaseMult = 253;

struct QueueEntry {
  std::int64_t f;
  int row, col;
  // Ties broken by smaller (row, col) for a deterministic expansion
  // order.
  bool operator>(const QueueEntry& o) const {
    if (f != o.f) return f > o.f;
    if (row != o.row) return row > o.row;
    return col > o.col;
  }
};

std::int64_t octile_h(int c0, int r0, int c1, int r1) {
  const std::int64_t dc = std::abs(c1 - c0);
  const std::int64_t dr = std::abs(r1 - r0);
  const std::int64_t lo = std::min(dc, dr);
  const std::int64_t hi = std::max(dc, dr);
  return kBaseMult * (kDiagonal * lo + kStraight * (hi - lo));
}

std::optional<GridPath> grid_search(const CostMap& cm, const Pose& start,
                                    const Pose& goal, const PlannerConfig& cfg,
                                    bool use_heuristic) {
  int sc, sr, gc, gr;
  if (!cm.world_to_cell(start.x, start.y, sc, sr)) return std::nullopt;
  if (!cm.world_to_cell(goal.x, goal.y, gc, gr)) return std::nullopt;

  auto traversable = [&](int c, int r) {
    return cm.in_bounds(c, r) && cm.cost[cm.idx(c, r)] < kCostInscribed;
  };
  if (!traversable(sc, sr) || !traversable(gc, gr)) return std::nullopt;

  const std::size_t n = cm.cost.size();
  constexpr std::int64_t kUnset = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> g(n, kUnset);
  std::vector<std::int32_t> parent(n, -1);
  std::vector<std::uint8_t> closed(n, 0);

  auto edge_mult = [&](std::size_t i) {
    return kBaseMult +
           static_cast<std::int64_t>(
               std::llround(cfg.cost_penalty * cm.cost[i]));
  };

  std::priority_queue<QueueEntry, std::vector<QueueEntry>,
                      std::greater<QueueEntry>>
      open;
  const std::size_t si = cm.idx(sc, sr);
  g[si] = 0;
  open.push({use_heuristic ? octile_h(sc, sr, gc, gr) : 0, sr, sc});

  static constexpr int dc8[] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int dr8[] = {0, 0, 1, -1, 1, -1, 1, -1};

  while (!open.empty()) {
    const QueueEntry e = open.top();
    open.pop();
    const std::size_t i = cm.idx(e.col, e.row);
    if (closed[i]) continue;
    closed[i] = 1;
    if (e.col == gc && e.row == gr) break;

    for (int k = 0; k < 8; ++k) {
      const int nc = e.col + dc8[k];
      const int nr = e.row + dr8[k];
      if (!traversable(nc, nr)) continue;
      const bool diagonal = k >= 4;
      if (diagonal &&
          (!traversable(e.col + dc8[k], e.row) ||
           !traversable(e.col, e.row + dr8[k]))) {
        continue;  // corner cutting forbidden
      }
      const std::size_t ni = cm.idx(nc, nr);
      if (closed[ni]) continue;
      const std::int64_t len = diagonal ? kDiagonal : kStraight;
      const std::int64_t cand = g[i] + len * edge_mult(ni);
      if (cand < g[ni]) {
        g[ni] = cand;
        parent[ni] = static_cast<std::int32_t>(i);
        const std::int64_t h =
            use_heuristic ? octile_h(nc, nr, gc, gr) : 0;
        open.push({cand + h, nr, nc});
      }
    }
  }

  const std::size_t gi = cm.idx(gc, gr);
  if (g[gi] == kUnset) return std::nullopt;

  GridPath path;
  path.total_cost_units = g[gi];
  path.total_cost = static_cast<double>(g[gi]) * cm.resolution /
                    (kStraight * kBaseMult);
  for (std::int64_t i = static_cast<std::int64_t>(gi); i >= 0;
       i = parent[static_cast<std::size_t>(i)]) {
    path.cells.emplace_back(static_cast<int>(i % cm.width),
                            static_cast<int>(i / cm.width));
    if (static_cast<std::size_t>(i) == si) break;
  }
  std::reverse(path.cells.begin(), path.cells.end());
  path.world_poses = to_world_path(path.cells, cm, cfg.decimate);
  return path;
}

}  // namespace

std::optional<GridPath> astar(const CostMap& cm, const Pose& start,
                              const Pose& goal, const PlannerConfig& cfg) {
  return grid_search(cm, start, goal, cfg, /*use_heuristic=*/true);
}

std::optional<GridPath> dijkstra(const CostMap& cm, const Pose& start,
                                 const Pose& goal, const PlannerConfig& cfg) {
  return grid_search(cm, start, goal, cfg, /*use_heuristic=*/false);
}

std::vector<Pose> to_world_path(const std::vector<std::pair<int, int>>& cells,
                                const CostMap& cm, int decimate) {
  std::vector<Pose> out;
  if (cells.empty()) return out;
  decimate = std::max(1, decimate);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < cells.size(); i += decimate) keep.push_back(i);
  if (keep.back() != cells.size() - 1) keep.push_back(cells.size() - 1);

  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto [c, r] = cells[keep[k]];
    Pose p;
    p.x = cm.origin.x + (c + 0.5) * cm.resolution;
    p.y = cm.origin.y + (r + 0.5) * cm.resolution;
    if (k + 1 < keep.size()) {
      const auto [nc, nr] = cells[keep[k + 1]];
      p.theta = std::atan2(static_cast<double>(nr - r),
                           static_cast<double>(nc - c));
    } else if (!out.empty()) {
      p.theta = out.back().theta;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace navsim
