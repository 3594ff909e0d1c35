#include "topoexp/local_window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "topoexp/errors.hpp"
#include "topoexp/grid_traversal.hpp"

namespace topoexp {

namespace {

constexpr std::uint8_t kScanPoint = 3;
constexpr std::uint8_t kOccluded = 4;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void LocalWindowConfig::validate() const {
  if (!(half_extent > 0.0)) throw ConfigError("executor.window_half_extent must be > 0");
  if (!(resolution > 0.0)) throw ConfigError("executor.window_resolution must be > 0");
  if (half_extent / resolution > 2000.0) {
    throw ConfigError("executor.window_half_extent / executor.window_resolution too large");
  }
  if (angular_bins < 1) throw ConfigError("window angular bins must be >= 1");
}

LocalWindow::LocalWindow(const Vec3& center, const DepthScan& scan, double robot_radius,
                         const LocalWindowConfig& config)
    : center_(center), config_(config) {
  const double res = config_.resolution;
  size_ = 2 * static_cast<int>(std::ceil(config_.half_extent / res));
  origin_x_ = center.x - size_ / 2 * res;
  origin_y_ = center.y - size_ / 2 * res;
  level_.assign(static_cast<std::size_t>(size_) * size_, 0);

  const int bins = config_.angular_bins;
  auto bin_of = [bins](double x, double y) {
    double deg = rad_to_deg(std::atan2(y, x));
    if (deg < 0.0) deg += 360.0;
    return std::min(bins - 1, static_cast<int>(deg / 360.0 * bins));
  };
  std::vector<double> free_range(static_cast<std::size_t>(bins), kInf);
  for (const Vec3& p : scan.points) {
    auto& r = free_range[static_cast<std::size_t>(bin_of(p.x, p.y))];
    r = std::min(r, std::hypot(p.x, p.y));
  }
  for (int cy = 0; cy < size_; ++cy) {
    for (int cx = 0; cx < size_; ++cx) {
      const Vec3 c = cell_center(cx, cy);
      const double dx = c.x - center.x;
      const double dy = c.y - center.y;
      const double r = std::hypot(dx, dy);
      if (r > config_.half_extent ||
          r > free_range[static_cast<std::size_t>(bin_of(dx, dy))] + res) {
        level_[index(cx, cy)] = kOccluded;
      }
    }
  }

  const double margin = robot_radius + res;
  const int reach = static_cast<int>(std::ceil(margin / res)) + 1;
  for (const Vec3& p : scan.points) {
    const double x = center.x + p.x;
    const double y = center.y + p.y;
    const int px = static_cast<int>(std::floor((x - origin_x_) / res));
    const int py = static_cast<int>(std::floor((y - origin_y_) / res));
    for (int cy = py - reach; cy <= py + reach; ++cy) {
      for (int cx = px - reach; cx <= px + reach; ++cx) {
        if (cx < 0 || cy < 0 || cx >= size_ || cy >= size_) continue;
        const Vec3 c = cell_center(cx, cy);
        const double d = std::hypot(c.x - x, c.y - y);
        std::uint8_t lvl = 0;
        if (cx == px && cy == py) lvl = kScanPoint;
        else if (d <= robot_radius) lvl = 2;
        else if (d <= margin) lvl = 1;
        auto& cell = level_[index(cx, cy)];
        cell = std::max(cell, lvl);
      }
    }
  }
}

Vec3 LocalWindow::cell_center(int cx, int cy) const {
  const double res = config_.resolution;
  return {origin_x_ + (cx + 0.5) * res, origin_y_ + (cy + 0.5) * res, center_.z};
}

int LocalWindow::cell_id(const Vec3& p) const {
  const double res = config_.resolution;
  const int cx = static_cast<int>(std::floor((p.x - origin_x_) / res));
  const int cy = static_cast<int>(std::floor((p.y - origin_y_) / res));
  if (cx < 0 || cy < 0 || cx >= size_ || cy >= size_) return -1;
  return static_cast<int>(index(cx, cy));
}

bool LocalWindow::inside(double x, double y) const { return cell_id({x, y, 0.0}) >= 0; }

bool LocalWindow::blocked(int cx, int cy, WindowLayer layer) const {
  if (cx < 0 || cy < 0 || cx >= size_ || cy >= size_) return true;
  return level_[index(cx, cy)] > static_cast<std::uint8_t>(layer);
}

bool LocalWindow::blocked_at(double x, double y, WindowLayer layer) const {
  const int id = cell_id({x, y, 0.0});
  return id < 0 || level_[static_cast<std::size_t>(id)] > static_cast<std::uint8_t>(layer);
}

std::optional<WindowLayer> LocalWindow::free_layer(const Vec3& p) const {
  const int id = cell_id(p);
  if (id < 0) return std::nullopt;
  switch (level_[static_cast<std::size_t>(id)]) {
    case 0:
      return WindowLayer::kHard;
    case 1:
      return WindowLayer::kSoft;
    case 2:
    case kScanPoint:
      return WindowLayer::kRaw;
    default:
      return std::nullopt;
  }
}

bool LocalWindow::passable(int id, WindowLayer layer, int start) const {
  return id == start || level_[static_cast<std::size_t>(id)] <= static_cast<std::uint8_t>(layer);
}

bool LocalWindow::straight_free(const Vec3& a, const Vec3& b, WindowLayer layer) const {
  const int start = cell_id(a);
  if (start < 0) return false;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len = std::hypot(dx, dy);
  if (len == 0.0) return true;
  bool free = true;
  traverse_cells(origin_x_, origin_y_, config_.resolution, a.x, a.y, dx / len, dy / len, len,
                 [&](int cx, int cy, double) {
                   if (cx < 0 || cy < 0 || cx >= size_ || cy >= size_ ||
                       !passable(static_cast<int>(index(cx, cy)), layer, start)) {
                     free = false;
                     return true;
                   }
                   return false;
                 });
  return free;
}

LocalWindow::Search LocalWindow::search(const Vec3& start, WindowLayer layer) const {
  Search s;
  s.start = cell_id(start);
  if (s.start < 0) return s;
  const std::size_t n = level_.size();
  s.dist.assign(n, kInf);
  s.parent.assign(n, -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  s.dist[static_cast<std::size_t>(s.start)] = 0.0;
  open.emplace(0.0, s.start);
  const double res = config_.resolution;
  const double diag = std::numbers::sqrt2 * res;
  auto ok = [&](int cx, int cy) {
    return cx >= 0 && cy >= 0 && cx < size_ && cy < size_ &&
           passable(static_cast<int>(index(cx, cy)), layer, s.start);
  };
  while (!open.empty()) {
    const auto [d, id] = open.top();
    open.pop();
    if (d > s.dist[static_cast<std::size_t>(id)]) continue;
    const int cx = id % size_;
    const int cy = id / size_;
    for (int oy = -1; oy <= 1; ++oy) {
      for (int ox = -1; ox <= 1; ++ox) {
        if (ox == 0 && oy == 0) continue;
        if (!ok(cx + ox, cy + oy)) continue;
        // No corner cutting past a blocked cell.
        if (ox != 0 && oy != 0 && (!ok(cx + ox, cy) || !ok(cx, cy + oy))) continue;
        const double nd = d + (ox != 0 && oy != 0 ? diag : res);
        const std::size_t ni = index(cx + ox, cy + oy);
        if (nd < s.dist[ni]) {
          s.dist[ni] = nd;
          s.parent[ni] = id;
          open.emplace(nd, static_cast<int>(ni));
        }
      }
    }
  }
  return s;
}

std::vector<Vec3> LocalWindow::extract(const Search& s, int end, const Vec3& start,
                                       const std::optional<Vec3>& tail, WindowLayer layer) const {
  std::vector<Vec3> cells;
  for (int id = end; id != s.start; id = s.parent[static_cast<std::size_t>(id)]) {
    cells.push_back(cell_center(id % size_, id / size_));
  }
  std::reverse(cells.begin(), cells.end());
  if (tail && (cells.empty() || straight_free(cells.back(), *tail, layer)) &&
      !blocked_at(tail->x, tail->y, layer)) {
    cells.push_back(*tail);
  }
  std::vector<Vec3> path{start};
  std::size_t at = 0;
  Vec3 from = start;
  while (at < cells.size()) {
    std::size_t far = at;
    for (std::size_t k = cells.size(); k-- > at;) {
      if (straight_free(from, cells[k], layer)) {
        far = k;
        break;
      }
    }
    path.push_back(cells[far]);
    from = cells[far];
    at = far + 1;
  }
  return path;
}

std::optional<std::vector<Vec3>> LocalWindow::plan(const Vec3& start, const Vec3& goal,
                                                   double tolerance, WindowLayer layer) const {
  const Search s = search(start, layer);
  if (s.start < 0) return std::nullopt;
  int best = -1;
  double best_cost = kInf;
  double best_gap = kInf;
  for (int id = 0; id < static_cast<int>(s.dist.size()); ++id) {
    const double cost = s.dist[static_cast<std::size_t>(id)];
    if (cost == kInf) continue;
    // The start cell is scored by the true start position.
    const Vec3 c = id == s.start ? start : cell_center(id % size_, id / size_);
    const double gap = std::hypot(c.x - goal.x, c.y - goal.y);
    if (gap <= tolerance) {
      if (best_gap > tolerance || cost < best_cost) {
        best = id;
        best_cost = cost;
        best_gap = gap;
      }
    } else if (best_gap > tolerance && gap < best_gap) {
      best = id;
      best_cost = cost;
      best_gap = gap;
    }
  }
  const double start_gap = std::hypot(start.x - goal.x, start.y - goal.y);
  if (best < 0 || (best_gap > tolerance && best_gap > start_gap - config_.resolution)) {
    return std::nullopt;
  }
  const auto path = extract(s, best, start, best_gap <= tolerance ? std::optional(goal) : std::nullopt, layer);
  if (path.size() < 2) return std::nullopt;
  return path;
}

std::optional<std::vector<Vec3>> LocalWindow::escape(const Vec3& start, WindowLayer layer) const {
  const Search s = search(start, layer);
  if (s.start < 0) return std::nullopt;
  int best = -1;
  for (int id = 0; id < static_cast<int>(s.dist.size()); ++id) {
    const double cost = s.dist[static_cast<std::size_t>(id)];
    if (cost == kInf || level_[static_cast<std::size_t>(id)] != 0) continue;
    if (best < 0 || cost < s.dist[static_cast<std::size_t>(best)]) best = id;
  }
  if (best < 0 || best == s.start) return std::nullopt;
  return extract(s, best, start, std::nullopt, layer);
}

std::size_t LocalWindow::blocked_count(WindowLayer layer) const {
  return static_cast<std::size_t>(std::count_if(level_.begin(), level_.end(), [&](std::uint8_t v) {
    return v > static_cast<std::uint8_t>(layer);
  }));
}

}  // namespace topoexp
