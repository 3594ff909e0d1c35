#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "topoexp/local_window.hpp"
#include "topoexp/map_gen.hpp"

using namespace topoexp;

namespace {

// Returns in the virtual frame for a straight wall x = dist, |y| <= half_len.
DepthScan wall_scan(double dist, double half_len) {
  DepthScan s;
  for (int k = 0; k < 720; ++k) {
    const double a = (k + 0.5) * std::numbers::pi / 360.0;
    const double c = std::cos(a);
    if (c <= 0.0) continue;
    const double r = dist / c;
    const double y = r * std::sin(a);
    if (std::abs(y) <= half_len && r < 5.0) s.points.push_back({dist, y, 0.0});
  }
  return s;
}

}  // namespace

TEST_SUITE("local_window") {

TEST_CASE("empty scan leaves the sensed disc free") {
  const Vec3 c{10, 10, 1};
  const LocalWindow w(c, DepthScan{}, 0.2, LocalWindowConfig{});
  CHECK(w.free_layer(c) == WindowLayer::kHard);
  CHECK(w.straight_free(c, {14.5, 10, 1}, WindowLayer::kHard));
  CHECK(w.straight_free(c, {7, 13, 1}, WindowLayer::kHard));
  // Corners of the square lie outside the sensed disc.
  CHECK(w.blocked_at(14.95, 14.95, WindowLayer::kRaw));
  CHECK_FALSE(w.blocked_at(13.0, 13.0, WindowLayer::kRaw));
}

TEST_CASE("layers and occlusion around a wall") {
  const Vec3 c{0, 0, 1};
  const LocalWindow w(c, wall_scan(1.0, 2.0), 0.2, LocalWindowConfig{});
  CHECK(w.blocked_at(1.01, 0.03, WindowLayer::kRaw));      // scan point cell
  CHECK(w.blocked_at(0.85, 0.05, WindowLayer::kSoft));     // within the radius
  CHECK_FALSE(w.blocked_at(0.85, 0.05, WindowLayer::kRaw));
  CHECK(w.blocked_at(0.75, 0.05, WindowLayer::kHard));     // within radius plus one cell
  CHECK_FALSE(w.blocked_at(0.75, 0.05, WindowLayer::kSoft));
  CHECK(w.blocked_at(2.5, 0.05, WindowLayer::kRaw));       // behind the wall
  CHECK_FALSE(w.blocked_at(-2.5, 0.05, WindowLayer::kHard));
  CHECK_FALSE(w.straight_free(c, {2.5, 0.0, 1}, WindowLayer::kRaw));
  CHECK(w.blocked_count(WindowLayer::kHard) > w.blocked_count(WindowLayer::kSoft));
  CHECK(w.blocked_count(WindowLayer::kSoft) > w.blocked_count(WindowLayer::kRaw));
}

TEST_CASE("plan goes around a short wall") {
  const Vec3 c{0, 0, 1};
  const LocalWindow w(c, wall_scan(1.0, 0.5), 0.2, LocalWindowConfig{});
  const Vec3 goal{1.5, 1.5, 1};
  const auto path = w.plan(c, goal, 0.3, WindowLayer::kHard);
  REQUIRE(path.has_value());
  CHECK(path->front() == c);
  CHECK(planar_distance(path->back(), goal) <= 0.3);
  for (std::size_t k = 1; k < path->size(); ++k) {
    CHECK(w.straight_free((*path)[k - 1], (*path)[k], WindowLayer::kHard));
  }
}

TEST_CASE("plan fails when no cell gets closer") {
  // Ring of returns at 0.35 m: every neighbouring cell is inflated.
  DepthScan ring;
  for (int k = 0; k < 720; ++k) {
    const double a = (k + 0.5) * std::numbers::pi / 360.0;
    ring.points.push_back({0.35 * std::cos(a), 0.35 * std::sin(a), 0.0});
  }
  const Vec3 c{0, 0, 1};
  const LocalWindow w(c, ring, 0.2, LocalWindowConfig{});
  const auto path = w.plan(c, {3, 0, 1}, 0.3, WindowLayer::kHard);
  CHECK_FALSE(path.has_value());
}

TEST_CASE("escape leads from an inflated cell into clear space") {
  const Vec3 c{0, 0, 1};
  const LocalWindow w(c, wall_scan(0.15, 2.0), 0.2, LocalWindowConfig{});
  const auto layer = w.free_layer(c);
  REQUIRE(layer.has_value());
  CHECK(*layer != WindowLayer::kHard);
  const auto out = w.escape(c, *layer);
  REQUIRE(out.has_value());
  CHECK(out->back().x < -0.1);
  CHECK_FALSE(w.blocked_at(out->back().x, out->back().y, WindowLayer::kHard));
}

}  // TEST_SUITE
