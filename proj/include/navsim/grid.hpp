#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "navsim/kinematics.hpp"

namespace navsim {

enum class Cell : std::uint8_t { Free = 0, Occupied = 1, Unknown = 2 };

/// Axis-aligned raster map. Cell (col, row) covers the square
/// [origin.x + col*res, origin.x + (col+1)*res) x [origin.y + row*res, ...).
struct OccupancyGrid {
  int width = 0;   // columns
  int height = 0;  // rows
  double resolution = 0.05;  // m/cell
  Pose origin;               // world position of cell (0,0) corner
  std::vector<Cell> cells;   // row-major, size width*height

  static OccupancyGrid make(int width, int height, double resolution,
                            Pose origin = {}, Cell fill = Cell::Free);

  Cell at(int col, int row) const { return cells[idx(col, row)]; }
  void set(int col, int row, Cell c) { cells[idx(col, row)] = c; }
  std::size_t idx(int col, int row) const {
    return static_cast<std::size_t>(row) * width + col;
  }
  bool in_bounds(int col, int row) const {
    return col >= 0 && col < width && row >= 0 && row < height;
  }

  bool world_to_cell(double x, double y, int& col, int& row) const;
  double cell_center_x(int col) const {
    return origin.x + (col + 0.5) * resolution;
  }
  double cell_center_y(int row) const {
    return origin.y + (row + 0.5) * resolution;
  }

  /// Fill the axis-aligned rectangle [x0,x1] x [y0,y1] (world meters).
  void fill_rect(double x0, double y0, double x1, double y1, Cell c);
};

/// Text map format: one header line "width height resolution origin_x
/// origin_y", then height rows of width characters, row 0 first:
/// '.' = Free, '#' = Occupied, '?' = Unknown.
void save_map(const OccupancyGrid& grid, std::ostream& os);
void save_map_file(const OccupancyGrid& grid, const std::string& path);
OccupancyGrid load_map(std::istream& is);
OccupancyGrid load_map_file(const std::string& path);

/// Log-odds occupancy accumulator with the same geometry as an
/// OccupancyGrid. Cells start at 0 (p = 0.5); a cell is "touched" once
/// any scan has updated it.
struct LogOddsGrid {
  int width = 0;
  int height = 0;
  double resolution = 0.05;
  Pose origin;
  double l_max = 5.0;
  std::vector<float> cells;
  std::vector<std::uint8_t> touched;

  static LogOddsGrid make(int width, int height, double resolution,
                          Pose origin = {}, double l_max = 5.0);
  static LogOddsGrid make_like(const OccupancyGrid& g, double l_max = 5.0);

  std::size_t idx(int col, int row) const {
    return static_cast<std::size_t>(row) * width + col;
  }
  bool in_bounds(int col, int row) const {
    return col >= 0 && col < width && row >= 0 && row < height;
  }
  bool world_to_cell(double x, double y, int& col, int& row) const;

  void add(int col, int row, double delta);
  double probability(int col, int row) const;

  /// Threshold at p = 0.5; never-touched cells become Unknown.
  OccupancyGrid to_occupancy() const;
};

/// Visit the cells crossed by the segment from (x0,y0) to (x1,y1) in
/// world coordinates, in order, including the end cell. Amanatides-Woo
/// traversal. Visited cells may lie outside the raster; callers filter
/// with in_bounds. Visitor returns false to stop early.
template <typename Grid, typename Visitor>
void traverse_ray(const Grid& grid, double x0, double y0, double x1, double y1,
                  Visitor&& visit);

}  // namespace navsim

#include "navsim/grid_traverse.inl"
