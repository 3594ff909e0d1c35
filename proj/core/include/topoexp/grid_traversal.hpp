#pragma once

// Grid walk shared by the simulator oracles and the local window.

#include <cmath>
#include <limits>

namespace topoexp {

inline constexpr double kCornerEps = 1e-12;

// Supercover traversal of the segment starting at (x, y) with unit direction
// (dx, dy). `visit(cx, cy, t)` gets the entry distance t of each touched cell
// and returns true to stop. Cells entered exactly at `length` are included.
template <class Visit>
void traverse_cells(double origin_x, double origin_y, double res, double x, double y, double dx,
                    double dy, double length, Visit&& visit) {
  const double gx = (x - origin_x) / res;
  const double gy = (y - origin_y) / res;
  int cx = static_cast<int>(std::floor(gx));
  int cy = static_cast<int>(std::floor(gy));
  constexpr double inf = std::numeric_limits<double>::infinity();

  int sx = 0;
  int sy = 0;
  double t_max_x = inf;
  double t_max_y = inf;
  double t_delta_x = inf;
  double t_delta_y = inf;
  if (dx > 0.0) {
    sx = 1;
    t_max_x = (cx + 1 - gx) * res / dx;
    t_delta_x = res / dx;
  } else if (dx < 0.0) {
    sx = -1;
    t_max_x = (gx - cx) * res / -dx;
    t_delta_x = res / -dx;
  }
  if (dy > 0.0) {
    sy = 1;
    t_max_y = (cy + 1 - gy) * res / dy;
    t_delta_y = res / dy;
  } else if (dy < 0.0) {
    sy = -1;
    t_max_y = (gy - cy) * res / -dy;
    t_delta_y = res / -dy;
  }

  if (visit(cx, cy, 0.0)) return;
  while (true) {
    if (t_max_x < t_max_y - kCornerEps) {
      if (t_max_x > length) return;
      cx += sx;
      if (visit(cx, cy, t_max_x)) return;
      t_max_x += t_delta_x;
    } else if (t_max_y < t_max_x - kCornerEps) {
      if (t_max_y > length) return;
      cy += sy;
      if (visit(cx, cy, t_max_y)) return;
      t_max_y += t_delta_y;
    } else {
      // Passing through a grid vertex touches both side cells.
      const double t = std::min(t_max_x, t_max_y);
      if (t > length || t == inf) return;
      if (visit(cx + sx, cy, t)) return;
      if (visit(cx, cy + sy, t)) return;
      cx += sx;
      cy += sy;
      if (visit(cx, cy, t)) return;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    }
  }
}

}  // namespace topoexp
