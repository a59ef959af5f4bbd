#pragma once

#include <cstdint>
#include <vector>

#include "navsim/grid.hpp"
#include "navsim/sim_world.hpp"

namespace navsim {

inline constexpr std::uint8_t kCostLethal = 255;
inline constexpr std::uint8_t kCostInscribed = 254;

struct CostMap {
  int width = 0;
  int height = 0;
  double resolution = 0.05;
  Pose origin;
  std::vector<std::uint8_t> cost;  // row-major
  std::uint64_t stamp = 0;

  static CostMap make(int width, int height, double resolution, Pose origin,
                      std::uint8_t fill = 0);

  std::size_t idx(int col, int row) const {
    return static_cast<std::size_t>(row) * width + col;
  }
  bool in_bounds(int col, int row) const {
    return col >= 0 && col < width && row >= 0 && row < height;
  }
  bool world_to_cell(double x, double y, int& col, int& row) const;

  /// Cost at a world point; out-of-map points count as free (0).
  std::uint8_t cost_at(double x, double y) const;
};

struct InflationConfig {
  double robot_radius = 0.2;      // m
  double inflation_radius = 0.5;  // m
  double decay_rate = 6.0;        // 1/m
};

/// Rasterize a tri-state grid: Occupied -> lethal, Unknown ->
/// unknown_cost, Free -> 0.
CostMap from_occupancy(const OccupancyGrid& grid, std::uint8_t unknown_cost = 0);

/// Probabilistic form: p >= occ_threshold -> lethal (inclusive),
/// untouched cells -> unknown_cost.
CostMap from_occupancy(const LogOddsGrid& grid, double occ_threshold,
                       std::uint8_t unknown_cost = 0);

/// Distance-based inflation around lethal cells: within robot_radius ->
/// inscribed (254), out to inflation_radius -> exponential decay from
/// 253, beyond -> unchanged. Existing higher costs are kept.
CostMap inflate(const CostMap& cm, const InflationConfig& cfg);

/// Rolling window around the robot: crop the global costmap, clear
/// along scan beams, mark scan endpoints lethal, re-inflate. Regions
/// outside the global map are treated as free.
CostMap local_window(const CostMap& global, const Pose& pose, double size,
                     const LaserScan& scan, const InflationConfig& cfg,
                     std::uint64_t stamp);

/// Euclidean distance (m) from each cell to the nearest lethal cell.
std::vector<float> lethal_distance_field(const CostMap& cm);

/// Debug dump: header plus rows of integer costs.
void save_costmap_text(const CostMap& cm, const std::string& path);

}  // namespace navsim
