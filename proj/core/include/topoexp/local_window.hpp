#pragma once

// Transient occupancy grid around the agent, built from the current scan only
// and thrown away after the step that used it.

#include <cstdint>
#include <optional>
#include <vector>

#include "topoexp/geometry.hpp"
#include "topoexp/world.hpp"

namespace topoexp {

struct LocalWindowConfig {
  double half_extent = 5.0;
  double resolution = 0.1;
  int angular_bins = 720;  // one per sensor ray

  void validate() const;
};

// Obstacle layers from most to least conservative. kHard adds one cell of
// margin to the robot radius, kSoft uses the radius alone, kRaw blocks only
// cells holding scan points. Cells behind a return, or outside the sensed
// disc, are blocked in every layer.
enum class WindowLayer : std::uint8_t { kHard = 0, kSoft = 1, kRaw = 2 };

class LocalWindow {
 public:
  // `scan` points are in the virtual frame centred on `center`.
  LocalWindow(const Vec3& center, const DepthScan& scan, double robot_radius,
              const LocalWindowConfig& config);

  const Vec3& center() const { return center_; }
  int size() const { return size_; }
  double resolution() const { return config_.resolution; }

  bool inside(double x, double y) const;
  bool blocked(int cx, int cy, WindowLayer layer) const;
  bool blocked_at(double x, double y, WindowLayer layer) const;

  // Most conservative layer in which p is free. Cells holding a scan point map
  // to kRaw: the agent may always leave the cell it stands in.
  std::optional<WindowLayer> free_layer(const Vec3& p) const;

  // The cell containing `a` is exempt so a path can start from it.
  bool straight_free(const Vec3& a, const Vec3& b, WindowLayer layer) const;

  // Shortest 8-connected grid path from `start` towards `goal`, shortened by
  // string pulling. Ends in a cell within `tolerance` of the goal when one is
  // reachable, otherwise in the reachable cell nearest the goal provided it
  // is at least one cell closer than the start. Returns nullopt when neither
  // exists. The first element is `start`.
  std::optional<std::vector<Vec3>> plan(const Vec3& start, const Vec3& goal, double tolerance,
                                        WindowLayer layer) const;

  // Shortest path within `layer` to the nearest cell free in kHard.
  std::optional<std::vector<Vec3>> escape(const Vec3& start, WindowLayer layer) const;

  std::size_t blocked_count(WindowLayer layer) const;

 private:
  struct Search {
    std::vector<double> dist;
    std::vector<int> parent;
    int start = -1;
  };

  std::size_t index(int cx, int cy) const { return static_cast<std::size_t>(cy) * size_ + cx; }
  Vec3 cell_center(int cx, int cy) const;
  int cell_id(const Vec3& p) const;  // -1 outside
  bool passable(int id, WindowLayer layer, int start) const;
  Search search(const Vec3& start, WindowLayer layer) const;
  std::vector<Vec3> extract(const Search& s, int end, const Vec3& start,
                            const std::optional<Vec3>& tail, WindowLayer layer) const;

  Vec3 center_;
  LocalWindowConfig config_;
  double origin_x_;
  double origin_y_;
  int size_;
  // 0 free, 1 margin, 2 within radius, 3 scan point, 4 occluded or unsensed
  std::vector<std::uint8_t> level_;
};

}  // namespace topoexp
