#pragma once

#include <cmath>
#include <limits>

namespace navsim {

template <typename Grid, typename Visitor>
void traverse_ray(const Grid& grid, double x0, double y0, double x1, double y1,
                  Visitor&& visit) {
  const double res = grid.resolution;
  // Grid-local coordinates in cell units.
  double gx = (x0 - grid.origin.x) / res;
  double gy = (y0 - grid.origin.y) / res;
  const double ex = (x1 - grid.origin.x) / res;
  const double ey = (y1 - grid.origin.y) / res;

  int col = static_cast<int>(std::floor(gx));
  int row = static_cast<int>(std::floor(gy));
  const int end_col = static_cast<int>(std::floor(ex));
  const int end_row = static_cast<int>(std::floor(ey));

  const double dx = ex - gx;
  const double dy = ey - gy;
  const int step_c = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int step_r = dy > 0 ? 1 : (dy < 0 ? -1 : 0);

  const double inf = std::numeric_limits<double>::infinity();
  // Parametric distance (in units of the full segment) to the next
  // vertical / horizontal cell boundary.
  double t_max_c = inf, t_delta_c = inf;
  if (step_c != 0) {
    const double next = step_c > 0 ? std::floor(gx) + 1.0 : std::floor(gx);
    t_max_c = (next - gx) / dx;
    t_delta_c = step_c / dx;
  }
  double t_max_r = inf, t_delta_r = inf;
  if (step_r != 0) {
    const double next = step_r > 0 ? std::floor(gy) + 1.0 : std::floor(gy);
    t_max_r = (next - gy) / dy;
    t_delta_r = step_r / dy;
  }

  while (true) {
    if (!visit(col, row)) return;
    if (col == end_col && row == end_row) return;
    if (t_max_c < t_max_r) {
      if (t_max_c > 1.0) return;
      col += step_c;
      t_max_c += t_delta_c;
    } else {
      if (t_max_r > 1.0) return;
      row += step_r;
      t_max_r += t_delta_r;
    }
  }
}

}  // namespace navsim
