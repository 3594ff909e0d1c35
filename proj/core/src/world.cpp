#include "topoexp/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "topoexp/errors.hpp"
#include "topoexp/grid_traversal.hpp"
#include "topoexp/random.hpp"
#include "topoexp/text_util.hpp"

namespace topoexp {

namespace {

FormatError map_error(std::size_t line_no, const std::string& what) {
  return FormatError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

WorldMap::WorldMap(double resolution, double origin_x, double origin_y, int width, int height,
                   double ceiling_height, std::vector<std::uint8_t> occupied)
    : resolution_(resolution),
      origin_x_(origin_x),
      origin_y_(origin_y),
      width_(width),
      height_(height),
      ceiling_height_(ceiling_height),
      cells_(std::move(occupied)) {
  if (!(resolution_ > 0.0)) throw FormatError("resolution must be > 0");
  if (width_ < 1 || height_ < 1) throw FormatError("width and height must be >= 1");
  if (cells_.size() != static_cast<std::size_t>(width_) * height_) {
    throw FormatError("cell count does not match width*height");
  }
  for (auto& c : cells_) c = c ? 1 : 0;
  free_cells_ = static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 0));
}

bool WorldMap::occupied_at(double x, double y) const {
  const CellIndex c = cell_of(x, y);
  return occupied(c.x, c.y);
}

CellIndex WorldMap::cell_of(double x, double y) const {
  return {static_cast<int>(std::floor((x - origin_x_) / resolution_)),
          static_cast<int>(std::floor((y - origin_y_) / resolution_))};
}

Vec3 WorldMap::cell_center(int cx, int cy) const {
  return {origin_x_ + (cx + 0.5) * resolution_, origin_y_ + (cy + 0.5) * resolution_, 0.0};
}

WorldMap load_map(std::string_view source) {
  const auto all = text::lines(source);
  std::size_t i = 0;
  while (i < all.size() && text::trim(all[i]).empty()) ++i;
  if (i == all.size()) throw map_error(1, "missing mapmeta header");

  const std::size_t header_line = i + 1;
  const auto tokens = text::split_whitespace(all[i]);
  if (tokens.empty() || tokens[0] != "mapmeta") {
    throw map_error(header_line, "expected 'mapmeta' header");
  }
  double resolution = 0.0;
  double ox = 0.0;
  double oy = 0.0;
  double ceiling = 0.0;
  bool have_res = false;
  bool have_origin = false;
  bool have_ceiling = false;
  for (std::size_t t = 1; t < tokens.size(); ++t) {
    const auto tok = tokens[t];
    auto value_of = [&](std::string_view key) { return tok.substr(key.size()); };
    if (tok.starts_with("resolution=")) {
      have_res = text::parse_double(value_of("resolution="), resolution);
    } else if (tok.starts_with("origin=")) {
      have_origin = t + 1 < tokens.size() && text::parse_double(value_of("origin="), ox) &&
                    text::parse_double(tokens[t + 1], oy);
      ++t;
    } else if (tok.starts_with("ceiling=")) {
      have_ceiling = text::parse_double(value_of("ceiling="), ceiling);
    } else {
      throw map_error(header_line, "unknown header token '" + std::string(tok) + "'");
    }
  }
  if (!have_res || !(resolution > 0.0)) throw map_error(header_line, "bad or missing resolution");
  if (!have_origin) throw map_error(header_line, "bad or missing origin");
  if (!have_ceiling || !(ceiling > 0.0)) throw map_error(header_line, "bad or missing ceiling");

  std::size_t last = all.size();
  while (last > i + 1 && text::trim(all[last - 1]).empty()) --last;
  std::vector<std::string_view> rows(all.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                     all.begin() + static_cast<std::ptrdiff_t>(last));
  if (rows.empty()) throw map_error(header_line + 1, "no grid rows");

  const int width = static_cast<int>(rows[0].size());
  const int height = static_cast<int>(rows.size());
  if (width < 1) throw map_error(header_line + 1, "row 1 is empty");

  std::vector<std::uint8_t> cells(static_cast<std::size_t>(width) * height, 0);
  for (int r = 0; r < height; ++r) {
    const std::size_t line_no = header_line + 1 + r;
    const auto row = rows[r];
    if (static_cast<int>(row.size()) != width) {
      throw map_error(line_no, "row " + std::to_string(r + 1) + " length " +
                                   std::to_string(row.size()) + " != " + std::to_string(width));
    }
    const int cy = height - 1 - r;  // first text row is the top of the map
    for (int c = 0; c < width; ++c) {
      const char ch = row[c];
      if (ch != '#' && ch != '.') {
        throw map_error(line_no, std::string("row ") + std::to_string(r + 1) +
                                     " has invalid character '" + ch + "'");
      }
      const bool occ = ch == '#';
      const bool border = r == 0 || r == height - 1 || c == 0 || c == width - 1;
      if (border && !occ) {
        throw map_error(line_no, "open boundary at row " + std::to_string(r + 1) + " column " +
                                     std::to_string(c + 1));
      }
      cells[static_cast<std::size_t>(cy) * width + c] = occ ? 1 : 0;
    }
  }
  return WorldMap(resolution, ox, oy, width, height, ceiling, std::move(cells));
}

WorldMap load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open map file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_map(ss.str());
}

std::string save_map(const WorldMap& world) {
  std::string out = "mapmeta resolution=" + text::format_double(world.resolution()) +
                    " origin=" + text::format_double(world.origin_x()) + " " +
                    text::format_double(world.origin_y()) +
                    " ceiling=" + text::format_double(world.ceiling_height()) + "\n";
  out.reserve(out.size() + static_cast<std::size_t>(world.width() + 1) * world.height());
  for (int cy = world.height() - 1; cy >= 0; --cy) {
    for (int cx = 0; cx < world.width(); ++cx) out.push_back(world.occupied(cx, cy) ? '#' : '.');
    out.push_back('\n');
  }
  return out;
}

void SensorModel::validate(int sectors) const {
  if (!(d_max > 0.0)) throw ConfigError("sensor.d_max must be > 0");
  if (!(h > 0.0)) throw ConfigError("sensor.h must be > 0");
  if (rays_per_rev <= 0 || sectors <= 0 || rays_per_rev % sectors != 0) {
    throw ConfigError("sensor.rays_per_rev must be a positive multiple of the sector count");
  }
  if (!(noise_sigma >= 0.0)) throw ConfigError("sensor.noise_sigma must be >= 0");
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0)) {
    throw ConfigError("sensor.dropout_prob must lie in [0, 1]");
  }
  if (!(outlier_prob >= 0.0 && outlier_prob <= 1.0)) {
    throw ConfigError("sensor.outlier_prob must lie in [0, 1]");
  }
  if (!(outlier_range >= 0.0)) throw ConfigError("sensor.outlier_range must be >= 0");
}

double cast_ray(const WorldMap& world, double x, double y, double angle_rad, double max_range) {
  double hit = max_range;
  traverse_cells(world.origin_x(), world.origin_y(), world.resolution(), x, y, std::cos(angle_rad), std::sin(angle_rad), max_range,
                 [&](int cx, int cy, double t) {
                   if (world.occupied(cx, cy)) {
                     hit = std::min(t, max_range);
                     return true;
                   }
                   return false;
                 });
  return hit;
}

DepthScan raycast_scan(const WorldMap& world, const SensorModel& sensor, const Pose& pose,
                       std::uint64_t rng_seed, std::span<const RayOverride> overrides,
                       double stamp) {
  const Vec3& p = pose.position;
  if (world.occupied_at(p.x, p.y)) {
    throw InvalidPoseError("sensor pose (" + text::format_double(p.x) + ", " +
                           text::format_double(p.y) + ") lies in an occupied cell");
  }
  DepthScan scan;
  scan.stamp = stamp;
  scan.points.reserve(static_cast<std::size_t>(sensor.rays_per_rev));
  Rng rng(rng_seed);
  const int rays = sensor.rays_per_rev;
  for (int k = 0; k < rays; ++k) {
    // Half-step offset keeps rays off the descriptor sector boundaries.
    const double az_deg = (k + 0.5) * 360.0 / rays;
    const double az = deg_to_rad(az_deg);
    // Fixed draw count per ray so the noise stream does not depend on geometry.
    const double u_drop = rng.uniform();
    const double u_out = rng.uniform();
    const double gauss = rng.normal();

    double range = 0.0;
    bool has_return = false;
    bool forced = false;
    for (const auto& o : overrides) {
      if (az_deg >= o.azimuth_lo_deg && az_deg < o.azimuth_hi_deg) {
        range = o.range;
        forced = true;
      }
    }
    if (forced) {
      has_return = true;
    } else if (u_drop < sensor.dropout_prob) {
      has_return = false;
    } else if (u_out < sensor.outlier_prob) {
      range = sensor.outlier_range;
      has_return = true;
    } else {
      const double truth = cast_ray(world, p.x, p.y, az, sensor.d_max);
      if (truth < sensor.d_max) {
        range = truth + sensor.noise_sigma * gauss;
        has_return = true;
      }
    }
    if (!has_return || !(range > 0.0) || range >= sensor.d_max) continue;
    scan.points.push_back({range * std::cos(az), range * std::sin(az), 0.0});
  }
  return scan;
}

bool line_of_sight_free(const WorldMap& world, const Vec3& a, const Vec3& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len = std::sqrt(dx * dx + dy * dy);
  if (len == 0.0) return !world.occupied_at(a.x, a.y);
  bool free = true;
  traverse_cells(world.origin_x(), world.origin_y(), world.resolution(), a.x, a.y, dx / len, dy / len, len, [&](int cx, int cy, double) {
    if (world.occupied(cx, cy)) {
      free = false;
      return true;
    }
    return false;
  });
  return free;
}

CoverageTracker::CoverageTracker(const WorldMap& world, double d_max)
    : world_(&world),
      d_max_(d_max),
      covered_(static_cast<std::size_t>(world.width()) * world.height(), 0) {}

void CoverageTracker::add_pose(const Vec3& position) {
  const WorldMap& w = *world_;
  const CellIndex lo = w.cell_of(position.x - d_max_, position.y - d_max_);
  const CellIndex hi = w.cell_of(position.x + d_max_, position.y + d_max_);
  const int x0 = std::max(lo.x, 0);
  const int y0 = std::max(lo.y, 0);
  const int x1 = std::min(hi.x, w.width() - 1);
  const int y1 = std::min(hi.y, w.height() - 1);
  const double d2 = d_max_ * d_max_;
  for (int cy = y0; cy <= y1; ++cy) {
    for (int cx = x0; cx <= x1; ++cx) {
      const std::size_t idx = static_cast<std::size_t>(cy) * w.width() + cx;
      if (covered_[idx] || w.occupied(cx, cy)) continue;
      const Vec3 c = w.cell_center(cx, cy);
      const double ddx = c.x - position.x;
      const double ddy = c.y - position.y;
      if (ddx * ddx + ddy * ddy >= d2) continue;
      if (line_of_sight_free(w, position, c)) {
        covered_[idx] = 1;
        ++covered_count_;
      }
    }
  }
}

double CoverageTracker::fraction() const {
  const std::size_t total = world_->free_cell_count();
  return total == 0 ? 0.0 : static_cast<double>(covered_count_) / static_cast<double>(total);
}

double coverage_fraction(const WorldMap& world, std::span<const Pose> poses,
                         const SensorModel& sensor) {
  CoverageTracker tracker(world, sensor.d_max);
  for (const auto& pose : poses) tracker.add_pose(pose.position);
  return tracker.fraction();
}

void write_scan_csv(std::ostream& out, const DepthScan& scan) {
  for (const auto& p : scan.points) {
    out << text::format_double(p.x) << ',' << text::format_double(p.y) << ','
        << text::format_double(p.z) << '\n';
  }
}

}  // namespace topoexp
