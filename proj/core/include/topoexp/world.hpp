#pragma once

// Ground-truth 2.5D worlds, the simulated omnidirectional range sensor and
// the line-of-sight / coverage oracles. The planner never reads a WorldMap;
// only the simulator, metrics and tests do.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topoexp/geometry.hpp"

namespace topoexp {

struct CellIndex {
  int x = 0;
  int y = 0;
  friend constexpr bool operator==(const CellIndex&, const CellIndex&) = default;
};

class WorldMap {
 public:
  // `occupied` is row-major with row 0 at the origin (lowest y).
  WorldMap(double resolution, double origin_x, double origin_y, int width, int height,
           double ceiling_height, std::vector<std::uint8_t> occupied);

  double resolution() const { return resolution_; }
  double origin_x() const { return origin_x_; }
  double origin_y() const { return origin_y_; }
  int width() const { return width_; }
  int height() const { return height_; }
  double ceiling_height() const { return ceiling_height_; }

  bool in_bounds(int cx, int cy) const { return cx >= 0 && cy >= 0 && cx < width_ && cy < height_; }

  // Out-of-bounds cells count as occupied.
  bool occupied(int cx, int cy) const {
    return !in_bounds(cx, cy) || cells_[static_cast<std::size_t>(cy) * width_ + cx] != 0;
  }
  bool occupied_at(double x, double y) const;

  CellIndex cell_of(double x, double y) const;
  Vec3 cell_center(int cx, int cy) const;

  std::size_t free_cell_count() const { return free_cells_; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }

  friend bool operator==(const WorldMap&, const WorldMap&) = default;

 private:
  double resolution_;
  double origin_x_;
  double origin_y_;
  int width_;
  int height_;
  double ceiling_height_;
  std::vector<std::uint8_t> cells_;
  std::size_t free_cells_ = 0;
};

// Parses the `mapmeta` text format. Throws FormatError naming the first bad line.
WorldMap load_map(std::string_view source);
WorldMap load_map_file(const std::string& path);
std::string save_map(const WorldMap& world);

struct SensorModel {
  double d_max = 5.0;
  double h = 1.0;
  int rays_per_rev = 720;
  double noise_sigma = 0.05;
  double dropout_prob = 0.02;
  double outlier_prob = 0.0;
  double outlier_range = 0.0;

  // Throws ConfigError; `sectors` is the descriptor sector count n.
  void validate(int sectors) const;
};

struct Pose {
  Vec3 position;
  double heading = 0.0;
};

// Points in the virtual frame: world-aligned axes centred on the sensor.
struct DepthScan {
  std::vector<Vec3> points;
  double stamp = 0.0;
};

// Forces every ray whose azimuth falls in [lo, hi) degrees to report `range`.
// Used to script gross depth errors deterministically.
struct RayOverride {
  double azimuth_lo_deg = 0.0;
  double azimuth_hi_deg = 0.0;
  double range = 0.0;
};

// First occupied-cell entry distance along a horizontal ray, or `max_range`
// when nothing is hit before it. Supercover: grazing a cell corner counts.
double cast_ray(const WorldMap& world, double x, double y, double angle_rad, double max_range);

DepthScan raycast_scan(const WorldMap& world, const SensorModel& sensor, const Pose& pose,
                       std::uint64_t rng_seed, std::span<const RayOverride> overrides = {},
                       double stamp = 0.0);

bool line_of_sight_free(const WorldMap& world, const Vec3& a, const Vec3& b);

double coverage_fraction(const WorldMap& world, std::span<const Pose> poses,
                         const SensorModel& sensor);

// Incremental form of coverage_fraction used by the episode loop.
class CoverageTracker {
 public:
  CoverageTracker(const WorldMap& world, double d_max);

  void add_pose(const Vec3& position);
  double fraction() const;
  bool covered(int cx, int cy) const {
    return covered_[static_cast<std::size_t>(cy) * world_->width() + cx] != 0;
  }
  std::size_t covered_count() const { return covered_count_; }

 private:
  const WorldMap* world_;
  double d_max_;
  std::vector<std::uint8_t> covered_;
  std::size_t covered_count_ = 0;
};

void write_scan_csv(std::ostream& out, const DepthScan& scan);

}  // namespace topoexp
