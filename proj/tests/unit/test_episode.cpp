#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "topoexp/episode.hpp"
#include "topoexp/text_util.hpp"

using namespace topoexp;
namespace fs = std::filesystem;

namespace {

EpisodeConfig generated(const std::string& kind, std::uint64_t seed) {
  EpisodeConfig c;
  c.map_generate = kind;
  c.explorer.seed = seed;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("topoexp_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST_SUITE("episode") {

TEST_CASE("sealed room completes with full coverage") {
  const EpisodeLog log = run_episode(generated("sealed-room", 1));
  CHECK(log.status() == EpisodeStatus::kComplete);
  CHECK(log.summary.coverage == 1.0);
  CHECK(log.summary.waypoints <= 3);
}

TEST_CASE("one iteration budget") {
  EpisodeConfig c = generated("two-room", 1);
  c.max_iterations = 1;
  const EpisodeLog log = run_episode(c);
  CHECK(log.status() == EpisodeStatus::kBudgetExhausted);
  CHECK(log.rows.size() == 1);
}

TEST_CASE("default budget scales with free area") {
  const Fixture f = make_two_room();
  const double area = static_cast<double>(f.world.free_cell_count()) * 0.01;
  CHECK(iteration_budget(f.world, 5.0) == static_cast<long long>(std::ceil(50.0 * area / 25.0)));
}

TEST_CASE("same config and seed give identical artifacts") {
  EpisodeConfig c = generated("l-shape", 4);
  c.explorer.wall_timing = false;
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  c.output_dir = a.string();
  run_episode(c);
  c.output_dir = b.string();
  run_episode(c);
  for (const char* file : {"metrics.csv", "graph.txt", "trajectory.csv", "events.csv", "snapshots/final.svg"}) {
    CHECK_MESSAGE(slurp(a / file) == slurp(b / file), file);
    CHECK_FALSE(slurp(a / file).empty());
  }
  CHECK(slurp(a / "metrics.csv").starts_with(
      "iter,t_sim,t_map_update_ms,t_global_ms,t_local_ms,coverage,nodes,frontiers,graph_bytes,traj_len_m\n"));
}

TEST_CASE("snapshots are written at the configured cadence") {
  EpisodeConfig c = generated("corridor", 1);
  c.snapshot_every = 10;
  c.snapshot_format = "ppm";
  const fs::path out = scratch("snap");
  c.output_dir = out.string();
  const EpisodeLog log = run_episode(c);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(out / "snapshots")) files += e.path().extension() == ".ppm";
  CHECK(files == log.rows.size() / 10 + 1);
}

TEST_CASE("batch aggregates per-seed summaries") {
  std::vector<EpisodeConfig> configs;
  for (std::uint64_t s : {1u, 2u, 3u}) configs.push_back(generated("two-room", s));
  EpisodeConfig broken = generated("two-room", 9);
  broken.map_generate.clear();
  broken.map_path = "/no/such/map.map";
  configs.push_back(broken);
  const BatchReport report = run_batch(configs, 2);
  REQUIRE(report.entries.size() == 4);
  CHECK_FALSE(report.entries[3].summary.has_value());
  CHECK_FALSE(report.entries[3].error.empty());

  const std::string csv = batch_summary_csv(report);
  const auto lines = text::lines(csv);
  REQUIRE(lines.size() >= 7);
  const auto header = split_line(std::string(lines[0]));
  const auto coverage_col = static_cast<std::size_t>(std::find(header.begin(), header.end(), "coverage") - header.begin());
  const auto traj_col = static_cast<std::size_t>(std::find(header.begin(), header.end(), "traj_len_m") - header.begin());
  double cov = 0.0;
  double traj = 0.0;
  for (int i = 0; i < 3; ++i) {
    cov += report.entries[static_cast<std::size_t>(i)].summary->coverage;
    traj += report.entries[static_cast<std::size_t>(i)].summary->traj_len_m;
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_line(std::string(lines[i]));
    if (f[0] != "mean") continue;
    CHECK(std::stod(f[coverage_col]) == doctest::Approx(cov / 3).epsilon(1e-6));
    CHECK(std::stod(f[traj_col]) == doctest::Approx(traj / 3).epsilon(1e-6));
  }
  CHECK(csv.find(",failed,") != std::string::npos);
  CHECK(csv.find("\nstd,") != std::string::npos);

  const std::string curves = coverage_curves_csv(report, 1.0);
  const auto curve = text::lines(curves);
  CHECK(split_line(std::string(curve[0])).size() == 4);  // failed episode has no column

  const std::string table = timing_table_csv(report);
  CHECK(table.find("map_update_ms") != std::string::npos);
  CHECK(table.find("global_path_ms") != std::string::npos);
  CHECK(table.find("local_traj_ms") != std::string::npos);
  CHECK(table.find("total_ms") != std::string::npos);
}

}  // TEST_SUITE
