#include "topoexp/map_gen.hpp"

#include <algorithm>
#include <cmath>

#include "topoexp/errors.hpp"
#include "topoexp/random.hpp"

namespace topoexp {

namespace {

constexpr double kWall = 0.1;

// Rounds to the 0.1 m lattice shared by every supported resolution.
double snap(double v) { return std::round(v * 10.0) / 10.0; }

}  // namespace

GridBuilder::GridBuilder(double width_m, double height_m, double resolution, bool fill_occupied)
    : resolution_(resolution),
      width_(static_cast<int>(std::lround(width_m / resolution))),
      height_(static_cast<int>(std::lround(height_m / resolution))),
      cells_(static_cast<std::size_t>(width_) * height_, fill_occupied ? 1 : 0) {
  if (width_ < 3 || height_ < 3) throw ConfigError("fixture too small for its resolution");
}

void GridBuilder::set_rect(const Rect& r, bool occupied) {
  // Cell centres inside [x0, x1): first index i with (i + 0.5) * res >= x0.
  const int x0 = std::max(0, static_cast<int>(std::ceil(r.x0 / resolution_ - 0.5 - 1e-9)));
  const int x1 = std::min(width_, static_cast<int>(std::ceil(r.x1 / resolution_ - 0.5 - 1e-9)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(r.y0 / resolution_ - 0.5 - 1e-9)));
  const int y1 = std::min(height_, static_cast<int>(std::ceil(r.y1 / resolution_ - 0.5 - 1e-9)));
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) cells_[static_cast<std::size_t>(y) * width_ + x] = occupied;
  }
}

void GridBuilder::set_disc(double cx, double cy, double radius, bool occupied) {
  const int x0 = std::max(0, static_cast<int>(std::floor((cx - radius) / resolution_)));
  const int x1 = std::min(width_ - 1, static_cast<int>(std::ceil((cx + radius) / resolution_)));
  const int y0 = std::max(0, static_cast<int>(std::floor((cy - radius) / resolution_)));
  const int y1 = std::min(height_ - 1, static_cast<int>(std::ceil((cy + radius) / resolution_)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double px = (x + 0.5) * resolution_ - cx;
      const double py = (y + 0.5) * resolution_ - cy;
      if (px * px + py * py <= radius * radius) {
        cells_[static_cast<std::size_t>(y) * width_ + x] = occupied;
      }
    }
  }
}

void GridBuilder::close_boundary() {
  for (int x = 0; x < width_; ++x) {
    cells_[x] = 1;
    cells_[static_cast<std::size_t>(height_ - 1) * width_ + x] = 1;
  }
  for (int y = 0; y < height_; ++y) {
    cells_[static_cast<std::size_t>(y) * width_] = 1;
    cells_[static_cast<std::size_t>(y) * width_ + width_ - 1] = 1;
  }
}

WorldMap GridBuilder::build(double ceiling_height) const {
  return WorldMap(resolution_, 0.0, 0.0, width_, height_, ceiling_height, cells_);
}

Fixture make_sealed_room(double side, double resolution) {
  const double total = side + 2 * kWall;
  GridBuilder b(total, total, resolution, true);
  b.set_rect({kWall, kWall, kWall + side, kWall + side}, false);
  b.close_boundary();
  return {b.build(3.0), {total / 2.0, total / 2.0, 1.0}};
}

Fixture make_corridor(double length, double width, double resolution) {
  const double w = length + 2 * kWall;
  const double h = width + 2 * kWall;
  GridBuilder b(w, h, resolution, true);
  b.set_rect({kWall, kWall, kWall + length, kWall + width}, false);
  b.close_boundary();
  return {b.build(3.0), {w / 2.0, h / 2.0, 1.0}};
}

Fixture make_two_room(double resolution) {
  // Room A: x in [0.1, 7.1), room B: x in [7.3, 14.3); y in [0.1, 6.1).
  // Doorway 2 m wide centred at y = 3.1 in the 0.2 m shared wall.
  GridBuilder b(14.4, 6.2, resolution, true);
  b.set_rect({0.1, 0.1, 7.1, 6.1}, false);
  b.set_rect({7.3, 0.1, 14.3, 6.1}, false);
  b.set_rect({7.1, 2.1, 7.3, 4.1}, false);
  b.close_boundary();
  return {b.build(3.0), {3.6, 3.1, 1.0}};
}

Fixture make_l_shape(double resolution) {
  // Horizontal arm 12 x 4 m, vertical arm 4 x 12 m sharing the corner square.
  GridBuilder b(12.2, 12.2, resolution, true);
  b.set_rect({0.1, 0.1, 12.1, 4.1}, false);
  b.set_rect({0.1, 0.1, 4.1, 12.1}, false);
  b.close_boundary();
  return {b.build(3.0), {10.0, 2.1, 1.0}};
}

Fixture make_thick_wall_room(double resolution) {
  GridBuilder b(10.0, 10.0, resolution, true);
  b.set_rect({2.0, 2.0, 8.0, 8.0}, false);
  b.close_boundary();
  return {b.build(3.0), {5.0, 5.0, 1.0}};
}

Fixture generate_forest(std::uint64_t seed, double resolution) {
  constexpr double kSize = 50.0;
  constexpr double kBorder = 0.2;
  constexpr double kBorderClearance = 1.5;
  constexpr double kGap = 2.0;          // minimum free gap between trunk surfaces
  constexpr double kStartClearance = 2.0;
  constexpr int kTargetTrees = 70;
  constexpr int kAttempts = 20000;

  GridBuilder b(kSize, kSize, resolution, false);
  b.set_rect({0.0, 0.0, kSize, kBorder}, true);
  b.set_rect({0.0, kSize - kBorder, kSize, kSize}, true);
  b.set_rect({0.0, 0.0, kBorder, kSize}, true);
  b.set_rect({kSize - kBorder, 0.0, kSize, kSize}, true);

  const Vec3 start{kSize / 2.0, kSize / 2.0, 1.0};
  struct Tree {
    double x, y, r;
  };
  std::vector<Tree> trees;
  Rng rng(mix_seed(seed, 0xf0e57ULL));
  for (int attempt = 0; attempt < kAttempts && static_cast<int>(trees.size()) < kTargetTrees;
       ++attempt) {
    const double r = rng.uniform(0.25, 0.6);
    const double lo = kBorder + kBorderClearance + r;
    const double x = rng.uniform(lo, kSize - lo);
    const double y = rng.uniform(lo, kSize - lo);
    if (std::hypot(x - start.x, y - start.y) < r + kStartClearance) continue;
    const bool clear = std::all_of(trees.begin(), trees.end(), [&](const Tree& t) {
      return std::hypot(x - t.x, y - t.y) >= r + t.r + kGap;
    });
    if (clear) trees.push_back({x, y, r});
  }
  for (const auto& t : trees) b.set_disc(t.x, t.y, t.r, true);
  b.close_boundary();
  return {b.build(2.0), start};
}

Fixture generate_tunnel(std::uint64_t seed, double resolution) {
  constexpr double kWidth = 120.0;
  constexpr double kHeight = 53.0;
  Rng rng(mix_seed(seed, 0x7a77e1ULL));
  GridBuilder b(kWidth, kHeight, resolution, true);

  // Three east-west galleries.
  const double base_y[3] = {7.0, 25.0, 43.0};
  double gallery_y[3];
  double gallery_w[3];
  double gallery_x0[3];
  double gallery_x1[3];
  for (int g = 0; g < 3; ++g) {
    gallery_w[g] = snap(rng.uniform(3.0, 4.0));
    gallery_y[g] = snap(base_y[g] + rng.uniform(-2.0, 2.0));
    gallery_x0[g] = snap(rng.uniform(3.0, 10.0));
    gallery_x1[g] = snap(rng.uniform(110.0, 117.0));
    b.set_rect({gallery_x0[g], gallery_y[g], gallery_x1[g], gallery_y[g] + gallery_w[g]}, false);
  }

  // North-south connectors between neighbouring galleries.
  for (int g = 0; g < 2; ++g) {
    const int count = 2 + static_cast<int>(rng.uniform() * 2.0);
    for (int c = 0; c < count; ++c) {
      const double span_lo = std::max(gallery_x0[g], gallery_x0[g + 1]) + 4.0;
      const double span_hi = std::min(gallery_x1[g], gallery_x1[g + 1]) - 7.0;
      const double slot = (span_hi - span_lo) / count;
      const double x = snap(span_lo + slot * c + rng.uniform(0.2, 0.8) * slot);
      const double w = snap(rng.uniform(3.0, 3.6));
      b.set_rect({x, gallery_y[g] + 0.5, x + w, gallery_y[g + 1] + 0.5}, false);
    }
  }

  // Dead-end side drifts and chambers off the outer galleries.
  for (int d = 0; d < 6; ++d) {
    const int g = d % 2 == 0 ? 0 : 2;
    const double x = snap(rng.uniform(gallery_x0[g] + 6.0, gallery_x1[g] - 10.0));
    const double len = snap(rng.uniform(4.0, 5.0));
    const double w = snap(rng.uniform(3.0, 3.5));
    if (g == 0) {
      const double top = gallery_y[0];
      const double bottom = std::max(1.5, top - len);
      b.set_rect({x, bottom, x + w, top + 0.5}, false);
    } else {
      const double bottom = gallery_y[2] + gallery_w[2] - 0.5;
      const double top = std::min(kHeight - 1.5, bottom + 0.5 + len);
      b.set_rect({x, bottom, x + w, top}, false);
    }
  }
  for (int c = 0; c < 2; ++c) {
    const double x = snap(rng.uniform(20.0, 95.0));
    const double y = snap(gallery_y[1] + gallery_w[1] - 0.5);
    b.set_rect({x, y, x + 7.0, y + 6.0}, false);
  }

  b.close_boundary();
  const Vec3 start{gallery_x0[1] + 2.0, gallery_y[1] + gallery_w[1] / 2.0, 1.0};
  return {b.build(3.0), start};
}

Fixture make_fixture(std::string_view kind, std::uint64_t seed, double resolution) {
  if (kind == "sealed-room") return make_sealed_room(6.0, resolution);
  if (kind == "corridor") return make_corridor(40.0, 3.0, resolution);
  if (kind == "two-room") return make_two_room(resolution);
  if (kind == "l-shape") return make_l_shape(resolution);
  if (kind == "thick-wall") return make_thick_wall_room(resolution);
  if (kind == "forest") return generate_forest(seed, resolution);
  if (kind == "tunnel") return generate_tunnel(seed, resolution);
  throw ConfigError("unknown fixture kind '" + std::string(kind) + "'");
}

std::vector<std::string> fixture_kinds() {
  return {"sealed-room", "corridor", "two-room", "l-shape", "thick-wall", "forest", "tunnel"};
}

}  // namespace topoexp
