#include "navsim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace navsim {

OccupancyGrid OccupancyGrid::make(int width, int height, double resolution,
                                  Pose origin, Cell fill) {
  if (width <= 0 || height <= 0 || resolution <= 0.0) {
    throw std::invalid_argument("OccupancyGrid: bad geometry");
  }
  OccupancyGrid g;
  g.width = width;
  g.height = height;
  g.resolution = resolution;
  g.origin = origin;
  g.cells.assign(static_cast<std::size_t>(width) * height, fill);
  return g;
}

bool OccupancyGrid::world_to_cell(double x, double y, int& col,
                                  int& row) const {
  col = static_cast<int>(std::floor((x - origin.x) / resolution));
  row = static_cast<int>(std::floor((y - origin.y) / resolution));
  return in_bounds(col, row);
}

void OccupancyGrid::fill_rect(double x0, double y0, double x1, double y1,
                              Cell c) {
  const int c0 = static_cast<int>(std::floor((x0 - origin.x) / resolution));
  const int r0 = static_cast<int>(std::floor((y0 - origin.y) / resolution));
  const int c1 = static_cast<int>(std::floor((x1 - origin.x) / resolution));
  const int r1 = static_cast<int>(std::floor((y1 - origin.y) / resolution));
  for (int r = std::max(0, r0); r <= std::min(height - 1, r1); ++r) {
    for (int cc = std::max(0, c0); cc <= std::min(width - 1, c1); ++cc) {
      set(cc, r, c);
    }
  }
}

namespace {
char cell_char(Cell c) {
  switch (c) {
    case Cell::Free: return '.';
    case Cell::Occupied: return '#';
    default: return '?';
  }
}
Cell char_cell(char ch) {
  switch (ch) {
    case '.': return Cell::Free;
    case '#': return Cell::Occupied;
    case '?': return Cell::Unknown;
    default: throw std::runtime_error("map: unexpected cell character");
  }
}
}  // namespace

void save_map(const OccupancyGrid& grid, std::ostream& os) {
  os << grid.width << ' ' << grid.height << ' ' << grid.resolution << ' '
     << grid.origin.x << ' ' << grid.origin.y << '\n';
  for (int r = 0; r < grid.height; ++r) {
    for (int c = 0; c < grid.width; ++c) os << cell_char(grid.at(c, r));
    os << '\n';
  }
}

void save_map_file(const OccupancyGrid& grid, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open map file for writing: " + path);
  save_map(grid, os);
}

OccupancyGrid load_map(std::istream& is) {
  int w = 0, h = 0;
  double res = 0.0, ox = 0.0, oy = 0.0;
  if (!(is >> w >> h >> res >> ox >> oy)) {
    throw std::runtime_error("map: bad header");
  }
  OccupancyGrid g = OccupancyGrid::make(w, h, res, Pose{ox, oy, 0.0});
  std::string line;
  std::getline(is, line);  // rest of header line
  for (int r = 0; r < h; ++r) {
    if (!std::getline(is, line) || static_cast<int>(line.size()) < w) {
      throw std::runtime_error("map: truncated rows");
    }
    for (int c = 0; c < w; ++c) g.set(c, r, char_cell(line[c]));
  }
  return g;
}

OccupancyGrid load_map_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open map file: " + path);
  return load_map(is);
}

LogOddsGrid LogOddsGrid::make(int width, int height, double resolution,
                              Pose origin, double l_max) {
  LogOddsGrid g;
  g.width = width;
  g.height = height;
  g.resolution = resolution;
  g.origin = origin;
  g.l_max = l_max;
  g.cells.assign(static_cast<std::size_t>(width) * height, 0.0f);
  g.touched.assign(g.cells.size(), 0);
  return g;
}

LogOddsGrid LogOddsGrid::make_like(const OccupancyGrid& g, double l_max) {
  return make(g.width, g.height, g.resolution, g.origin, l_max);
}

bool LogOddsGrid::world_to_cell(double x, double y, int& col, int& row) const {
  col = static_cast<int>(std::floor((x - origin.x) / resolution));
  row = static_cast<int>(std::floor((y - origin.y) / resolution));
  return in_bounds(col, row);
}

void LogOddsGrid::add(int col, int row, double delta) {
  const std::size_t i = idx(col, row);
  const double l = std::clamp(static_cast<double>(cells[i]) + delta, -l_max,
                              l_max);
  cells[i] = static_cast<float>(l);
  touched[i] = 1;
}

double LogOddsGrid::probability(int col, int row) const {
  return 1.0 / (1.0 + std::exp(-static_cast<double>(cells[idx(col, row)])));
}

OccupancyGrid LogOddsGrid::to_occupancy() const {
  OccupancyGrid g = OccupancyGrid::make(width, height, resolution, origin,
                                        Cell::Unknown);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const std::size_t i = idx(c, r);
      if (!touched[i]) continue;
      g.set(c, r, cells[i] > 0.0f ? Cell::Occupied : Cell::Free);
    }
  }
  return g;
}

}  // namespace navsim
