#include "navsim/costmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "navsim/distance_field.hpp"
#include "navsim/kernels.hpp"

namespace navsim {

CostMap CostMap::make(int width, int height, double resolution, Pose origin,
                      std::uint8_t fill) {
  if (width <= 0 || height <= 0 || resolution <= 0.0) {
    throw std::invalid_argument("CostMap: bad geometry");
  }
  CostMap cm;
  cm.width = width;
  cm.height = height;
  cm.resolution = resolution;
  cm.origin = origin;
  cm.cost.assign(static_cast<std::size_t>(width) * height, fill);
  return cm;
}

bool CostMap::world_to_cell(double x, double y, int& col, int& row) const {
  col = static_cast<int>(std::floor((x - origin.x) / resolution));
  row = static_cast<int>(std::floor((y - origin.y) / resolution));
  return in_bounds(col, row);
}

std::uint8_t CostMap::cost_at(double x, double y) const {
  int c, r;
  if (!world_to_cell(x, y, c, r)) return 0;
  return cost[idx(c, r)];
}

CostMap from_occupancy(const OccupancyGrid& grid, std::uint8_t unknown_cost) {
  CostMap cm = CostMap::make(grid.width, grid.height, grid.resolution,
                             grid.origin);
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    switch (grid.cells[i]) {
      case Cell::Occupied: cm.cost[i] = kCostLethal; break;
      case Cell::Unknown: cm.cost[i] = unknown_cost; break;
      default: break;
    }
  }
  return cm;
}

CostMap from_occupancy(const LogOddsGrid& grid, double occ_threshold,
                       std::uint8_t unknown_cost) {
  CostMap cm = CostMap::make(grid.width, grid.height, grid.resolution,
                             grid.origin);
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    if (!grid.touched[i]) {
      cm.cost[i] = unknown_cost;
      continue;
    }
    const double p = 1.0 / (1.0 + std::exp(-static_cast<double>(grid.cells[i])));
    if (p >= occ_threshold) cm.cost[i] = kCostLethal;
  }
  return cm;
}

CostMap inflate(const CostMap& cm, const InflationConfig& cfg) {
  std::vector<std::uint8_t> lethal(cm.cost.size());
  bool any = false;
  for (std::size_t i = 0; i < cm.cost.size(); ++i) {
    lethal[i] = cm.cost[i] == kCostLethal;
    any |= lethal[i] != 0;
  }
  CostMap out = cm;
  if (!any) return out;

  const std::vector<float> dist =
      distance_field(cm.width, cm.height, cm.resolution, lethal);
  std::vector<float> profile(dist.size());
  kernels::ops().decay_cost(dist.data(), profile.data(), dist.size(),
                            static_cast<float>(cfg.robot_radius),
                            static_cast<float>(cfg.inflation_radius),
                            static_cast<float>(cfg.decay_rate));
  // Conservative inscribed band: cell-center distances understate the
  // true footprint clearance by up to one cell diagonal, so the margin
  // keeps "footprint touches obstacle => cost >= 254" true everywhere.
  const float inscribed = static_cast<float>(
      cfg.robot_radius + std::sqrt(2.0) * cm.resolution);
  for (std::size_t i = 0; i < out.cost.size(); ++i) {
    std::uint8_t c = static_cast<std::uint8_t>(std::lround(profile[i]));
    if (dist[i] <= inscribed) c = std::max(c, kCostInscribed);
    out.cost[i] = std::max(out.cost[i], c);
  }
  return out;
}

CostMap local_window(const CostMap& global, const Pose& pose, double size,
                     const LaserScan& scan, const InflationConfig& cfg,
                     std::uint64_t stamp) {
  const double res = global.resolution;
  const int n = std::max(1, static_cast<int>(std::ceil(size / res)));
  // Snap the window origin onto the global cell lattice so cropping is
  // a pure index shift.
  const int c0 = static_cast<int>(
      std::floor((pose.x - size / 2.0 - global.origin.x) / res));
  const int r0 = static_cast<int>(
      std::floor((pose.y - size / 2.0 - global.origin.y) / res));

  CostMap win = CostMap::make(
      n, n, res,
      Pose{global.origin.x + c0 * res, global.origin.y + r0 * res, 0.0});
  win.stamp = stamp;

  // Seed with the global lethal layer only; decayed costs are
  // recomputed after clearing/marking.
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int gc = c0 + c, gr = r0 + r;
      if (global.in_bounds(gc, gr) &&
          global.cost[global.idx(gc, gr)] == kCostLethal) {
        win.cost[win.idx(c, r)] = kCostLethal;
      }
    }
  }

  // Clearing and marking from the scan.
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const double r = scan.ranges[i];
    const bool hit = r < scan.max_range - 1e-9;
    const double a = pose.theta + scan.angles[i];
    const double ex = pose.x + r * std::cos(a);
    const double ey = pose.y + r * std::sin(a);
    int ec = -1, er = -1;
    if (hit) win.world_to_cell(ex, ey, ec, er);
    traverse_ray(win, pose.x, pose.y, ex, ey, [&](int c, int rr) {
      if (!win.in_bounds(c, rr)) return true;
      if (hit && c == ec && rr == er) {
        win.cost[win.idx(c, rr)] = kCostLethal;
        return false;
      }
      win.cost[win.idx(c, rr)] = 0;
      return true;
    });
  }

  return inflate(win, cfg);
}

std::vector<float> lethal_distance_field(const CostMap& cm) {
  std::vector<std::uint8_t> lethal(cm.cost.size());
  for (std::size_t i = 0; i < cm.cost.size(); ++i) {
    lethal[i] = cm.cost[i] == kCostLethal;
  }
  return distance_field(cm.width, cm.height, cm.resolution, lethal);
}

void save_costmap_text(const CostMap& cm, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open costmap file: " + path);
  os << cm.width << ' ' << cm.height << ' ' << cm.resolution << ' '
     << cm.origin.x << ' ' << cm.origin.y << '\n';
  for (int r = 0; r < cm.height; ++r) {
    for (int c = 0; c < cm.width; ++c) {
      if (c) os << ' ';
      os << static_cast<int>(cm.cost[cm.idx(c, r)]);
    }
    os << '\n';
  }
}

}  // namespace navsim
