#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "topoexp/episode.hpp"
#include "topoexp/explorer.hpp"
#include "topoexp/map_gen.hpp"

using namespace topoexp;

namespace {

// Distance from p to the nearest occupied cell rectangle within `reach`.
double clearance(const WorldMap& w, const Vec3& p, double reach) {
  const double res = w.resolution();
  const CellIndex lo = w.cell_of(p.x - reach, p.y - reach);
  const CellIndex hi = w.cell_of(p.x + reach, p.y + reach);
  double best = reach;
  for (int cy = lo.y; cy <= hi.y; ++cy) {
    for (int cx = lo.x; cx <= hi.x; ++cx) {
      if (!w.occupied(cx, cy)) continue;
      const double x0 = w.origin_x() + cx * res;
      const double y0 = w.origin_y() + cy * res;
      const double dx = std::max({x0 - p.x, 0.0, p.x - (x0 + res)});
      const double dy = std::max({y0 - p.y, 0.0, p.y - (y0 + res)});
      best = std::min(best, std::hypot(dx, dy));
    }
  }
  return best;
}

Explorer run(const Fixture& f, ExplorerConfig cfg, long long budget = 20000) {
  Explorer ex(f.world, f.start, std::move(cfg));
  while (!ex.terminated() && static_cast<long long>(ex.metrics().size()) < budget) ex.step();
  return ex;
}

}  // namespace

TEST_SUITE("explorer") {

TEST_CASE("first iteration in open space") {
  GridBuilder b(30.0, 30.0, 0.1, false);
  b.close_boundary();
  const WorldMap w = b.build(3.0);
  Explorer ex(w, {15, 15, 1}, ExplorerConfig{});
  const IterationMetrics& m = ex.step();
  CHECK_FALSE(m.terminated);
  CHECK(ex.graph().waypoint_count() == 1);
  CHECK(ex.graph().frontiers().size() >= 1);
  CHECK(m.frontiers == ex.graph().frontiers().size());
}

TEST_CASE("sealed room terminates at once") {
  const Fixture f = make_sealed_room();
  const Explorer ex = run(f, ExplorerConfig{});
  CHECK(ex.terminated());
  CHECK(ex.graph().frontiers().empty());
  CHECK(ex.graph().waypoint_count() <= 3);
  CHECK(ex.coverage() == 1.0);
}

TEST_CASE("in-wall frontier is corrected once") {
  const Fixture f = make_thick_wall_room();
  ExplorerConfig cfg;
  cfg.faults.push_back({0, {0.0, 5.0, 4.9}});
  const Explorer ex = run(f, cfg);
  std::set<NodeId> in_wall;
  for (const CandidateRecord& c : ex.candidates()) {
    if (c.inserted && f.world.occupied_at(c.position.x, c.position.y)) in_wall.insert(*c.inserted);
  }
  REQUIRE_FALSE(in_wall.empty());
  for (NodeId id : in_wall) {
    int fired = 0;
    for (const ExplorerEvent& e : ex.events()) fired += e.kind == ExplorerEventKind::kTargetInvalid && e.node == id;
    CHECK(fired == 1);
    CHECK_FALSE(ex.graph().contains(id));
  }
  CHECK(ex.terminated());
  CHECK(ex.coverage() >= 0.95);
}

TEST_CASE("small fixtures terminate within the iteration budget") {
  for (const char* kind : {"corridor", "two-room", "l-shape"}) {
    const Fixture f = make_fixture(kind, 1, 0.1);
    const long long budget = iteration_budget(f.world, 5.0);
    const Explorer ex = run(f, ExplorerConfig{}, budget);
    CHECK_MESSAGE(ex.terminated(), kind);
    CHECK_MESSAGE(ex.coverage() >= 0.95, kind);
    CHECK_NOTHROW(ex.graph().audit());
  }
}

TEST_CASE("noiseless agent keeps its radius from obstacles") {
  ExplorerConfig cfg;
  cfg.sensor = testutil::noiseless();
  for (std::uint64_t seed : {1u, 2u}) {
    const Fixture f = generate_forest(seed);
    cfg.seed = seed;
    const Explorer ex = run(f, cfg);
    CHECK(ex.terminated());
    double worst = 1.0;
    for (const TrajectorySample& s : ex.trajectory()) worst = std::min(worst, clearance(f.world, s.position, 1.0));
    CHECK(worst > cfg.motion.robot_radius);
  }
}

TEST_CASE("metrics rows are consistent") {
  const Fixture f = make_two_room();
  const Explorer ex = run(f, ExplorerConfig{});
  double cov = 0.0;
  for (std::size_t i = 0; i < ex.metrics().size(); ++i) {
    const IterationMetrics& m = ex.metrics()[i];
    CHECK(m.iter == static_cast<long long>(i));
    CHECK(m.coverage >= cov);
    cov = m.coverage;
  }
  CHECK(ex.metrics().back().terminated);
  CHECK(ex.metrics().back().frontiers == 0);
}

}  // TEST_SUITE
