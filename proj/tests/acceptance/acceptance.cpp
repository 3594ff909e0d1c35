// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "topoexp/atsp.hpp"
#include "topoexp/descriptor.hpp"
#include "topoexp/episode.hpp"
#include "topoexp/map_gen.hpp"
#include "topoexp/random.hpp"
#include "topoexp/topo_graph.hpp"
#include "topoexp/world.hpp"

using namespace topoexp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

EpisodeConfig fixture_config(const std::string& kind, std::uint64_t seed) {
  EpisodeConfig c;
  c.map_generate = kind;
  c.map_seed = seed;
  c.explorer.seed = seed;
  c.snapshot_every = 0;
  return c;
}

struct TimedLog {
  EpisodeLog log;
  double wall_s = 0.0;
};

TimedLog run_timed(const EpisodeConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  TimedLog out{run_episode(c), 0.0};
  out.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

double mean_of(const std::vector<IterationMetrics>& rows,
               const std::function<bool(const IterationMetrics&)>& keep,
               const std::function<double(const IterationMetrics&)>& value) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (!keep(r)) continue;
    sum += value(r);
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

// Shared between criteria 1 and 2.
std::vector<TimedLog> g_forest;
std::optional<TimedLog> g_tunnel;

Outcome completeness() {
  constexpr double kMinCoverage = 0.95;
  constexpr double kMaxWall = 60.0;
  int ok = 0;
  double worst_cov = 1.0;
  double worst_wall = 0.0;
  std::string failures;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    TimedLog t = run_timed(fixture_config("forest", seed));
    const auto& s = t.log.summary;
    const auto& last = t.log.rows.back();
    const bool good = s.terminated && last.frontiers == 0 && s.coverage >= kMinCoverage &&
                      t.wall_s < kMaxWall;
    worst_cov = std::min(worst_cov, s.coverage);
    worst_wall = std::max(worst_wall, t.wall_s);
    if (good) ++ok;
    else failures += fmt(" seed%llu(cov=%.3f,wall=%.1fs,term=%d)", static_cast<unsigned long long>(seed), s.coverage, t.wall_s, s.terminated ? 1 : 0);
    g_forest.push_back(std::move(t));
  }
  return {ok == 20, fmt("%d/20 forest episodes complete; min coverage %.3f (>= %.2f); max wall %.1f s (< %.0f s)%s",
                       ok, worst_cov, kMinCoverage, worst_wall, kMaxWall, failures.c_str())};
}

Outcome latency() {
  constexpr double kMaxTotal = 35.0;
  constexpr double kMaxShortcutGlobal = 1.0;
  if (!g_tunnel) g_tunnel = run_timed(fixture_config("tunnel", 1));
  auto all = [](const IterationMetrics&) { return true; };
  auto shortcut = [](const IterationMetrics& r) { return r.plan_mode == PlanMode::kShortcut; };
  auto total = [](const IterationMetrics& r) { return r.total_ms(); };
  auto global = [](const IterationMetrics& r) { return r.t_global_ms; };

  const auto& tunnel = g_tunnel->log.rows;
  std::vector<IterationMetrics> forest;
  for (const auto& t : g_forest) forest.insert(forest.end(), t.log.rows.begin(), t.log.rows.end());

  const double tunnel_total = mean_of(tunnel, all, total);
  const double forest_total = mean_of(forest, all, total);
  const double tunnel_sc = mean_of(tunnel, shortcut, global);
  const double forest_sc = mean_of(forest, shortcut, global);
  const bool pass = tunnel_total <= kMaxTotal && forest_total <= kMaxTotal &&
                    tunnel_sc <= kMaxShortcutGlobal && forest_sc <= kMaxShortcutGlobal;
  return {pass, fmt("mean total ms/iter tunnel %.3f, forest %.3f (<= %.0f; reference 6.92 / 5.01); "
                    "mean global ms on shortcut iterations tunnel %.4f, forest %.4f (<= %.0f)",
                    tunnel_total, forest_total, kMaxTotal, tunnel_sc, forest_sc, kMaxShortcutGlobal)};
}

Outcome memory() {
  constexpr double kMaxBytes = 2.0 * 1024 * 1024;
  constexpr double kMaxRelChange = 0.10;
  if (!g_tunnel) g_tunnel = run_timed(fixture_config("tunnel", 1));
  EpisodeConfig fine = fixture_config("tunnel", 1);
  fine.map_resolution = 0.05;
  const EpisodeLog half = run_episode(fine);
  const double coarse_b = static_cast<double>(g_tunnel->log.summary.final_graph_bytes);
  const double fine_b = static_cast<double>(half.summary.final_graph_bytes);
  const double rel = std::abs(fine_b - coarse_b) / coarse_b;
  const auto cells = [](const EpisodeConfig& c) {
    const Fixture f = resolve_world(c);
    return static_cast<long long>(f.world.width()) * f.world.height();
  };
  const long long coarse_cells = cells(fixture_config("tunnel", 1));
  const long long fine_cells = cells(fine);
  const bool pass = coarse_b <= kMaxBytes && rel < kMaxRelChange && g_tunnel->log.summary.terminated &&
                    half.summary.terminated;
  return {pass, fmt("tunnel graph %.3f MB at 0.1 m, %lld cells (<= 2 MB; reference 0.16 MB); %.3f MB at 0.05 m, "
                    "%lld cells; relative change %.4f (< %.2f)",
                    coarse_b / 1e6, coarse_cells, fine_b / 1e6, fine_cells, rel, kMaxRelChange)};
}

// Descriptor oracle: direct per-sector minimum by scanning every point.
std::vector<double> brute_descriptor(const std::vector<Vec3>& pts, const DescriptorConfig& cfg) {
  const int n = cfg.sectors();
  std::vector<double> d(static_cast<std::size_t>(n), cfg.d_max);
  for (int j = 0; j < n; ++j) {
    for (const Vec3& p : pts) {
      if (!(std::abs(p.z) < cfg.h / 2) || !(norm(p) < cfg.d_max)) continue;
      double deg = std::atan2(p.y, p.x) * 180.0 / std::numbers::pi;
      if (deg < 0) deg += 360.0;
      if (deg >= 360.0) deg = 0.0;
      if (static_cast<int>(deg / cfg.theta_deg) % n != j) continue;
      d[static_cast<std::size_t>(j)] = std::min(d[static_cast<std::size_t>(j)], std::sqrt(p.x * p.x + p.y * p.y));
    }
  }
  return d;
}

Outcome descriptor_props() {
  const DescriptorConfig cfg;
  const int n = cfg.sectors();
  Rng rng(20240611);
  int fails = 0;
  int checks = 0;

  // Rotation by k sectors shifts the descriptor by exactly k.
  for (int trial = 0; trial < 500; ++trial) {
    const int k = static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
    std::vector<Vec3> a, b;
    for (int i = 0; i < 200; ++i) {
      const int j = static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
      const double u = rng.uniform(0.01, 0.99);
      const double r = rng.uniform(0.2, 6.0);
      const double z = rng.uniform(-0.8, 0.8);
      const double t0 = (j + u) * cfg.theta_deg * std::numbers::pi / 180.0;
      const double t1 = (((j + k) % n) + u) * cfg.theta_deg * std::numbers::pi / 180.0;
      a.push_back({r * std::cos(t0), r * std::sin(t0), z});
      b.push_back({r * std::cos(t1), r * std::sin(t1), z});
    }
    const auto da = build_descriptor(extract_valid_points({a, 0.0}, cfg), cfg);
    const auto db = build_descriptor(extract_valid_points({b, 0.0}, cfg), cfg);
    ++checks;
    for (int j = 0; j < n; ++j) {
      // Rotated coordinates can move the range by an ulp; the sector shift is exact.
      if (std::abs(da[j] - db[(j + k) % n]) > 1e-12) {
        ++fails;
        break;
      }
    }
  }

  // Per-sector minimum against brute force on 10^4 random scans.
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<Vec3> pts;
    const int count = 1 + static_cast<int>(rng.next() % 120);
    for (int i = 0; i < count; ++i) {
      pts.push_back({rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(-0.7, 0.7)});
    }
    const auto got = build_descriptor(extract_valid_points({pts, 0.0}, cfg), cfg);
    const auto want = brute_descriptor(pts, cfg);
    ++checks;
    for (int j = 0; j < n; ++j) {
      if (got[j] != want[static_cast<std::size_t>(j)]) {
        ++fails;
        break;
      }
    }
  }

  // Strict validity bounds on range and height.
  const std::vector<Vec3> edge_pts = {{cfg.d_max, 0, 0}, {0, 4, cfg.h / 2}, {0, -4, -cfg.h / 2},
                                      {std::nextafter(cfg.d_max, 0.0), 0.0, 0.0},
                                      {-3, 0, std::nextafter(cfg.h / 2, 0.0)}};
  const auto valid = extract_valid_points({edge_pts, 0.0}, cfg);
  ++checks;
  if (valid.size() != 2 || valid[0].x != std::nextafter(cfg.d_max, 0.0) || valid[1].x != -3) ++fails;

  // Seam-wrapping window minimum against enumeration of all sectors in range.
  const int half = cfg.window_sectors() / 2;
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> depths(static_cast<std::size_t>(n));
    for (auto& d : depths) d = rng.uniform(0.1, cfg.d_max);
    const DepthDescriptor desc(cfg, depths);
    const int s = trial % 4 == 0 ? static_cast<int>(rng.next() % 3) * (n - 1) / 2
                                 : static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
    const double heading = (s + 0.5) * cfg.theta_deg * std::numbers::pi / 180.0;
    double want = cfg.d_max * 10;
    for (int j = 0; j < n; ++j) {
      const int dist = std::min(std::abs(j - s), n - std::abs(j - s));
      if (dist <= half) want = std::min(want, depths[static_cast<std::size_t>(j)]);
    }
    ++checks;
    if (window_min(desc, heading) != want) ++fails;
  }
  return {fails == 0, fmt("%d/%d property checks pass (rotation, brute-force minimum on 10000 scans, "
                          "strict bounds, seam windows)", checks - fails, checks)};
}

Vec3 random_free_point(const WorldMap& w, Rng& rng) {
  for (;;) {
    const int cx = static_cast<int>(rng.next() % static_cast<std::uint64_t>(w.width()));
    const int cy = static_cast<int>(rng.next() % static_cast<std::uint64_t>(w.height()));
    if (w.occupied(cx, cy)) continue;
    const Vec3 c = w.cell_center(cx, cy);
    const double j = 0.45 * w.resolution();
    return {c.x + rng.uniform(-j, j), c.y + rng.uniform(-j, j), 1.0};
  }
}

Outcome visibility() {
  std::vector<Fixture> fixtures;
  for (const char* k : {"sealed-room", "corridor", "two-room", "l-shape", "forest", "tunnel"}) {
    fixtures.push_back(make_fixture(k, 1, 0.1));
  }
  DescriptorConfig cfg;
  SensorModel sensor;
  sensor.noise_sigma = 0.0;
  sensor.dropout_prob = 0.0;
  Rng rng(77);
  int covered = 0;
  int false_pos = 0;
  for (int k = 0; k < 500; ++k) {
    const WorldMap& w = fixtures[static_cast<std::size_t>(k) % fixtures.size()].world;
    const Vec3 o = random_free_point(w, rng);
    const DepthScan scan = raycast_scan(w, sensor, {o, 0.0}, mix_seed(5, static_cast<std::uint64_t>(k)));
    const DepthDescriptor d = build_descriptor(extract_valid_points(scan, cfg), cfg);
    const double ang = rng.uniform(0, 2 * std::numbers::pi);
    const double r = cfg.d_max * std::sqrt(rng.uniform());
    const Vec3 t{o.x + r * std::cos(ang), o.y + r * std::sin(ang), o.z};
    if (covers_point(d, o, t)) {
      ++covered;
      if (!line_of_sight_free(w, o, t)) ++false_pos;
    }
  }

  // Edges that appear in a step between two nodes that already existed come
  // from the connectivity update; edges to nodes created in the same step
  // join a generating waypoint to its new frontiers and are only reported.
  std::size_t edges = 0;
  std::size_t bad_edges = 0;
  std::size_t frontier_edges = 0;
  std::size_t frontier_blocked = 0;
  for (const char* kind : {"two-room", "l-shape", "corridor", "forest"}) {
    EpisodeConfig c = fixture_config(kind, 1);
    c.explorer.sensor.noise_sigma = 0.0;
    c.explorer.sensor.dropout_prob = 0.0;
    const Fixture fx = resolve_world(c);
    Explorer ex(fx.world, fx.start, c.explorer);
    const long long budget = iteration_budget(fx.world, c.explorer.descriptor.d_max);
    while (!ex.terminated() && static_cast<long long>(ex.metrics().size()) < budget) {
      std::set<std::pair<NodeId, NodeId>> before;
      for (const auto& [id, node] : ex.graph().nodes()) {
        for (const Edge& e : node.adj) before.emplace(id, e.to);
      }
      const IterationMetrics& row = ex.step();
      std::set<NodeId> fresh;
      for (const CandidateRecord& r : ex.candidates()) {
        if (r.iter == row.iter && r.inserted) fresh.insert(*r.inserted);
      }
      const TopoGraph& g = ex.graph();
      for (const auto& [id, node] : g.nodes()) {
        for (const Edge& e : node.adj) {
          if (e.to < id || before.count({id, e.to})) continue;
          const bool existed = !fresh.count(id) && !fresh.count(e.to);
          const bool los = line_of_sight_free(fx.world, node.position, g.node(e.to).position);
          if (existed) {
            ++edges;
            if (!los) ++bad_edges;
          } else {
            ++frontier_edges;
            if (!los) ++frontier_blocked;
          }
        }
      }
    }
  }
  return {false_pos == 0 && bad_edges == 0 && covered > 0 && edges > 0,
          fmt("500 noiseless pairs, %d covered, %d false positives; %zu/%zu connectivity edges line-of-sight "
              "free (frontier insertion edges, not judged: %zu, %zu clipped)",
              covered, false_pos, edges - bad_edges, edges, frontier_edges, frontier_blocked)};
}

Outcome atsp_oracle() {
  Rng rng(4242);
  int exact_ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(trial % 8);
    CostMatrix c(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
      for (std::size_t j = 1; j <= m; ++j) {
        if (i != j) c.at(i, j) = std::floor(rng.uniform(1.0, 100.0));
      }
    }
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 1);
    double best = std::numeric_limits<double>::infinity();
    do {
      double cost = 0.0;
      std::size_t prev = 0;
      for (std::size_t v : perm) {
        cost += c.at(prev, v);
        prev = v;
      }
      best = std::min(best, cost);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (solve_atsp_exact(c).cost == best) ++exact_ok;
  }

  int bound_ok = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + static_cast<std::size_t>(trial % 11);
    std::vector<Vec3> pts(m + 1);
    for (auto& p : pts) p = {rng.uniform(0, 30), rng.uniform(0, 30), 0};
    CostMatrix c(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
      for (std::size_t j = 1; j <= m; ++j) {
        // Detour factor makes the matrix asymmetric like graph costs with one-way penalties.
        if (i != j) c.at(i, j) = planar_distance(pts[i], pts[j]) * rng.uniform(1.0, 1.4);
      }
    }
    const double ratio = solve_atsp_heuristic(c).cost / solve_atsp_exact(c).cost;
    worst = std::max(worst, ratio);
    if (ratio <= 1.3 + 1e-12) ++bound_ok;
  }
  return {exact_ok == 200 && bound_ok == 200,
          fmt("exact equals brute force on %d/200 (m<=8); heuristic within 1.3x on %d/200 (m<=12), "
              "worst ratio %.4f", exact_ok, bound_ok, worst)};
}

Outcome node_correction() {
  EpisodeConfig c = fixture_config("thick-wall", 1);
  // Every ray of sector 0 reports 4.9 m although the wall is 3 m away.
  c.explorer.faults.push_back({0, {0.0, 5.0, 4.9}});
  const Fixture fx = resolve_world(c);
  const EpisodeLog log = run_episode(c, fx);

  std::set<std::uint32_t> in_wall;
  for (const auto& cand : log.candidates) {
    if (cand.inserted && fx.world.occupied_at(cand.position.x, cand.position.y)) {
      in_wall.insert(cand.inserted->value);
    }
  }
  std::map<std::uint32_t, int> invalid;
  for (const auto& e : log.events) {
    if (e.kind == ExplorerEventKind::kTargetInvalid) ++invalid[e.node.value];
  }
  const TopoGraph g = deserialize(log.graph_text);
  bool each_once = !in_wall.empty();
  for (std::uint32_t id : in_wall) {
    if (invalid[id] != 1 || g.contains(NodeId{id})) each_once = false;
  }
  const bool pass = each_once && log.summary.terminated && log.summary.coverage >= 0.95;
  return {pass, fmt("%zu in-wall frontier(s) created; each fired target_invalid once and was removed: %s; "
                    "terminated %s with coverage %.3f (>= 0.95)",
                    in_wall.size(), each_once ? "yes" : "no", log.summary.terminated ? "yes" : "no",
                    log.summary.coverage)};
}

Outcome determinism() {
  std::string detail;
  bool pass = true;
  for (const char* kind : {"forest", "two-room"}) {
    EpisodeConfig c = fixture_config(kind, 3);
    c.explorer.wall_timing = false;
    const EpisodeLog a = run_episode(c);
    const EpisodeLog b = run_episode(c);
    const bool same = metrics_csv(a.rows) == metrics_csv(b.rows) && a.graph_text == b.graph_text;
    pass = pass && same;
    detail += fmt("%s%s seed 3: metrics %zu rows, graph %zu bytes, %s", detail.empty() ? "" : "; ", kind,
                  a.rows.size(), a.graph_text.size(), same ? "identical" : "DIFFER");
  }
  return {pass, detail};
}

// Smallest number of guard positions on a 0.5 m lattice whose coverage sets
// together cover every free cell, by exhaustive search over 1..3 guards.
int minimal_guard_cover(const WorldMap& w, double d_max) {
  std::vector<Vec3> guards;
  for (double y = 0.35; y < w.height() * w.resolution(); y += 0.5) {
    for (double x = 0.35; x < w.width() * w.resolution(); x += 0.5) {
      if (!w.occupied_at(x, y)) guards.push_back({x, y, 1.0});
    }
  }
  std::vector<std::size_t> free_idx;
  for (int cy = 0; cy < w.height(); ++cy) {
    for (int cx = 0; cx < w.width(); ++cx) {
      if (!w.occupied(cx, cy)) free_idx.push_back(static_cast<std::size_t>(cy) * w.width() + cx);
    }
  }
  const std::size_t words = (free_idx.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> sets;
  for (const Vec3& gp : guards) {
    CoverageTracker t(w, d_max);
    t.add_pose(gp);
    std::vector<std::uint64_t> bits(words, 0);
    for (std::size_t k = 0; k < free_idx.size(); ++k) {
      const int cx = static_cast<int>(free_idx[k] % static_cast<std::size_t>(w.width()));
      const int cy = static_cast<int>(free_idx[k] / static_cast<std::size_t>(w.width()));
      if (t.covered(cx, cy)) bits[k / 64] |= std::uint64_t{1} << (k % 64);
    }
    sets.push_back(std::move(bits));
  }
  std::vector<std::uint64_t> full(words, ~std::uint64_t{0});
  if (free_idx.size() % 64 != 0) full.back() = (std::uint64_t{1} << (free_idx.size() % 64)) - 1;
  auto complete = [&](std::initializer_list<std::size_t> pick) {
    for (std::size_t wd = 0; wd < words; ++wd) {
      std::uint64_t acc = 0;
      for (std::size_t p : pick) acc |= sets[p][wd];
      if (acc != full[wd]) return false;
    }
    return true;
  };
  const std::size_t g = sets.size();
  for (std::size_t a = 0; a < g; ++a) if (complete({a})) return 1;
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = a + 1; b < g; ++b) if (complete({a, b})) return 2;
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = a + 1; b < g; ++b)
      for (std::size_t c = b + 1; c < g; ++c) if (complete({a, b, c})) return 3;
  return -1;
}

Outcome redundancy() {
  EpisodeConfig c = fixture_config("two-room", 1);
  const Fixture fx = resolve_world(c);
  const EpisodeLog log = run_episode(c, fx);
  const TopoGraph g = deserialize(log.graph_text);

  // Every inserted frontier is checked against the waypoints that already
  // held a descriptor at insertion time, apart from the one generating it.
  int redundant = 0;
  int inserted = 0;
  for (const auto& cand : log.candidates) {
    if (!cand.inserted) continue;
    ++inserted;
    for (const auto& [id, seq] : log.waypoint_seq) {
      if (seq >= cand.seq || id == cand.generator) continue;
      const TopoNode& wp = g.node(id);
      if (covers_point(*wp.descriptor, wp.position, cand.position)) {
        ++redundant;
        break;
      }
    }
  }
  const int minimal = minimal_guard_cover(fx.world, c.explorer.descriptor.d_max);
  const std::size_t nodes = log.summary.nodes;
  const bool pass = log.summary.terminated && redundant == 0 && minimal > 0 &&
                    nodes <= static_cast<std::size_t>(3 * minimal);
  return {pass, fmt("coverage %.3f; %d inserted frontiers, %d already covered; %zu nodes vs minimal "
                    "guard cover %d (bound %d)",
                    log.summary.coverage, inserted, redundant, nodes, minimal, 3 * minimal)};
}

}  // namespace

int main(int argc, char** argv) {
  // Optional criterion ids restrict the run, e.g. `acceptance 4 7`.
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "completeness and liveness", completeness},
      {2, "per-iteration latency", latency},
      {3, "memory scaling", memory},
      {4, "descriptor correctness", descriptor_props},
      {5, "visibility soundness", visibility},
      {6, "atsp optimality", atsp_oracle},
      {7, "node correction", node_correction},
      {8, "determinism", determinism},
      {9, "redundancy suppression", redundancy},
  };
  int failed = 0;
  int ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
