#include "topoexp/episode.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "topoexp/errors.hpp"
#include "topoexp/render.hpp"
#include "topoexp/text_util.hpp"

namespace topoexp {

namespace {

using text::format_double;
using text::format_fixed;

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << data;
}

std::vector<Vec3> positions(const std::vector<TrajectorySample>& samples) {
  std::vector<Vec3> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.position);
  return out;
}

std::string snapshot_name(long long iter, const std::string& ext) {
  std::string digits = std::to_string(iter);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return "snap_" + digits + "." + ext;
}

EpisodeSummary summarize(const Explorer& ex, double wall_s) {
  EpisodeSummary s;
  const auto& rows = ex.metrics();
  s.terminated = ex.terminated();
  s.iterations = static_cast<long long>(rows.size());
  s.sim_time_s = ex.agent().time;
  s.traj_len_m = ex.agent().travelled;
  s.coverage = ex.coverage();
  s.final_graph_bytes = graph_memory_bytes(ex.graph());
  s.nodes = ex.graph().node_count();
  s.waypoints = ex.graph().waypoint_count();
  s.edges = ex.graph().edge_count();
  for (const auto& r : rows) {
    s.peak_graph_bytes = std::max(s.peak_graph_bytes, r.graph_bytes);
    s.mean_map_update_ms += r.t_map_update_ms;
    s.mean_global_ms += r.t_global_ms;
    s.mean_local_ms += r.t_local_ms;
  }
  if (!rows.empty()) {
    const double n = static_cast<double>(rows.size());
    s.mean_map_update_ms /= n;
    s.mean_global_ms /= n;
    s.mean_local_ms /= n;
  }
  s.mean_total_ms = s.mean_map_update_ms + s.mean_global_ms + s.mean_local_ms;
  s.wall_time_s = wall_s;
  return s;
}

}  // namespace

Fixture resolve_world(const EpisodeConfig& config) {
  Fixture f = config.map_path.empty()
                  ? make_fixture(config.map_generate, config.map_seed, config.map_resolution)
                  : Fixture{load_map_file(config.map_path), {}};
  if (config.start) f.start = *config.start;
  return f;
}

long long iteration_budget(const WorldMap& world, double d_max) {
  const double cell_area = world.resolution() * world.resolution();
  const double free_area = static_cast<double>(world.free_cell_count()) * cell_area;
  return static_cast<long long>(std::ceil(50.0 * free_area / (d_max * d_max)));
}

EpisodeLog run_episode(const EpisodeConfig& config) {
  validate(config);
  return run_episode(config, resolve_world(config));
}

EpisodeLog run_episode(const EpisodeConfig& config, const Fixture& fixture) {
  validate(config);
  const auto wall_start = std::chrono::steady_clock::now();
  Explorer ex(fixture.world, fixture.start, config.explorer);
  const long long budget = config.max_iterations > 0
                               ? config.max_iterations
                               : iteration_budget(fixture.world, config.explorer.sensor.d_max);

  const bool write = !config.output_dir.empty();
  std::filesystem::path snap_dir;
  if (write) {
    snap_dir = std::filesystem::path(config.output_dir) / "snapshots";
    std::filesystem::create_directories(snap_dir);
  }
  while (!ex.terminated() && static_cast<long long>(ex.metrics().size()) < budget) {
    ex.step();
    ex.graph().audit();
    const long long done = static_cast<long long>(ex.metrics().size());
    if (write && config.snapshot_every > 0 && done % config.snapshot_every == 0) {
      const auto traj = positions(ex.trajectory());
      render_snapshot(fixture.world, ex.graph(), traj,
                      (snap_dir / snapshot_name(done, config.snapshot_format)).string());
    }
  }
  const double wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

  EpisodeLog log;
  log.rows = ex.metrics();
  log.summary = summarize(ex, config.explorer.wall_timing ? wall_s : 0.0);
  log.graph_text = serialize(ex.graph());
  log.trajectory = ex.trajectory();
  log.events = ex.events();
  log.candidates = ex.candidates();
  log.waypoint_seq = ex.waypoint_seq();
  if (write) write_artifacts(config, fixture, log);
  return log;
}

void write_artifacts(const EpisodeConfig& config, const Fixture& fixture, const EpisodeLog& log) {
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir / "snapshots");
  write_file(dir / "metrics.csv", metrics_csv(log.rows));
  write_file(dir / "candidates.csv", candidates_csv(log.candidates));
  write_file(dir / "trajectory.csv", trajectory_csv(log.trajectory));
  write_file(dir / "events.csv", events_csv(log.events));
  write_file(dir / "graph.txt", log.graph_text);
  write_file(dir / "config.resolved", config_to_text(config));
  write_file(dir / "summary.txt", summary_line(log.summary) + "\n");
  const TopoGraph g = deserialize(log.graph_text);
  render_snapshot(fixture.world, g, positions(log.trajectory),
                  (dir / "snapshots" / ("final." + config.snapshot_format)).string());
}

std::string metrics_csv(const std::vector<IterationMetrics>& rows) {
  std::string out = "iter,t_sim,t_map_update_ms,t_global_ms,t_local_ms,coverage,nodes,frontiers,graph_bytes,traj_len_m\n";
  for (const auto& r : rows) {
    out += std::to_string(r.iter) + "," + format_fixed(r.t_sim, 3) + "," +
           format_fixed(r.t_map_update_ms, 4) + "," + format_fixed(r.t_global_ms, 4) + "," +
           format_fixed(r.t_local_ms, 4) + "," + format_fixed(r.coverage, 6) + "," +
           std::to_string(r.nodes) + "," + std::to_string(r.frontiers) + "," +
           std::to_string(r.graph_bytes) + "," + format_fixed(r.traj_len_m, 4) + "\n";
  }
  return out;
}

std::string candidates_csv(const std::vector<CandidateRecord>& rows) {
  std::string out = "iter,seq,generator,kind,x,y,z,inserted_id\n";
  for (const auto& r : rows) {
    out += std::to_string(r.iter) + "," + std::to_string(r.seq) + "," + to_string(r.generator) +
           "," + std::string(to_string(r.kind)) + "," + format_double(r.position.x) + "," +
           format_double(r.position.y) + "," + format_double(r.position.z) + "," +
           (r.inserted ? to_string(*r.inserted) : std::string("-")) + "\n";
  }
  return out;
}

std::string trajectory_csv(const std::vector<TrajectorySample>& rows) {
  std::string out = "t,x,y,z,speed\n";
  for (const auto& r : rows) {
    out += format_fixed(r.t, 3) + "," + format_double(r.position.x) + "," +
           format_double(r.position.y) + "," + format_double(r.position.z) + "," +
           format_double(r.speed) + "\n";
  }
  return out;
}

std::string events_csv(const std::vector<ExplorerEvent>& rows) {
  std::string out = "iter,event,node\n";
  for (const auto& r : rows) {
    out += std::to_string(r.iter) + "," + std::string(to_string(r.kind)) + "," + to_string(r.node) + "\n";
  }
  return out;
}

std::string summary_line(const EpisodeSummary& s) {
  return std::string("explored: ") + (s.terminated ? "complete" : "budget exhausted") + " in " +
         format_fixed(s.sim_time_s, 1) + " s sim with a " + format_fixed(s.traj_len_m, 1) +
         " m trajectory; coverage " + format_fixed(s.coverage, 3) + ", " +
         std::to_string(s.iterations) + " iterations, " + std::to_string(s.nodes) + " nodes (" +
         std::to_string(s.waypoints) + " waypoints), " + std::to_string(s.edges) +
         " edges, graph " + format_fixed(s.final_graph_bytes / 1e6, 3) + " MB; mean ms/iter map " +
         format_fixed(s.mean_map_update_ms, 3) + " global " + format_fixed(s.mean_global_ms, 3) +
         " local " + format_fixed(s.mean_local_ms, 3) + " total " +
         format_fixed(s.mean_total_ms, 3);
}

std::string episode_label(const EpisodeConfig& config) {
  if (!config.map_generate.empty()) return config.map_generate;
  return std::filesystem::path(config.map_path).stem().string();
}

BatchReport run_batch(const std::vector<EpisodeConfig>& configs, int jobs) {
  BatchReport report;
  report.entries.resize(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      EpisodeConfig cfg = configs[i];
      BatchEntry& entry = report.entries[i];
      entry.label = episode_label(cfg);
      entry.seed = cfg.explorer.seed;
      if (!cfg.output_dir.empty()) {
        cfg.output_dir = (std::filesystem::path(cfg.output_dir) /
                          (entry.label + "_seed" + std::to_string(entry.seed)))
                             .string();
      }
      try {
        const EpisodeLog log = run_episode(cfg);
        entry.summary = log.summary;
        for (const auto& r : log.rows) entry.coverage_curve.emplace_back(r.t_sim, r.coverage);
      } catch (const std::exception& e) {
        entry.error = e.what();
        std::replace(entry.error.begin(), entry.error.end(), '\n', ';');
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(configs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return report;
}

namespace {

// Errors can span lines and contain commas.
std::string csv_quote(const std::string& text) {
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += "\"\"";
    else if (ch == '\n') out += "; ";
    else out.push_back(ch);
  }
  return out + "\"";
}

}  // namespace

std::string batch_summary_csv(const BatchReport& report) {
  std::string out =
      "label,seed,status,iterations,sim_time_s,traj_len_m,coverage,nodes,waypoints,edges,"
      "final_graph_bytes,mean_map_update_ms,mean_global_ms,mean_local_ms,mean_total_ms,error\n";
  auto fields = [](const EpisodeSummary& s) {
    return std::vector<double>{static_cast<double>(s.iterations), s.sim_time_s, s.traj_len_m,
                               s.coverage, static_cast<double>(s.nodes),
                               static_cast<double>(s.waypoints), static_cast<double>(s.edges),
                               static_cast<double>(s.final_graph_bytes), s.mean_map_update_ms,
                               s.mean_global_ms, s.mean_local_ms, s.mean_total_ms};
  };
  std::vector<std::vector<double>> ok;
  for (const auto& e : report.entries) {
    out += e.label + "," + std::to_string(e.seed) + ",";
    if (!e.summary) {
      out += "failed,,,,,,,,,,,,," + csv_quote(e.error) + "\n";
      continue;
    }
    out += e.summary->terminated ? "complete" : "budget_exhausted";
    const auto f = fields(*e.summary);
    for (double v : f) out += "," + format_fixed(v, 6);
    out += ",\n";
    ok.push_back(f);
  }
  if (ok.empty()) return out;
  const std::size_t k = ok.front().size();
  std::vector<double> mean(k, 0.0);
  std::vector<double> sd(k, 0.0);
  for (const auto& f : ok) {
    for (std::size_t j = 0; j < k; ++j) mean[j] += f[j];
  }
  for (double& m : mean) m /= static_cast<double>(ok.size());
  if (ok.size() > 1) {
    for (const auto& f : ok) {
      for (std::size_t j = 0; j < k; ++j) sd[j] += (f[j] - mean[j]) * (f[j] - mean[j]);
    }
    for (double& s : sd) s = std::sqrt(s / static_cast<double>(ok.size() - 1));
  }
  out += "mean,,";
  for (double v : mean) out += "," + format_fixed(v, 6);
  out += ",\nstd,,";
  for (double v : sd) out += "," + format_fixed(v, 6);
  out += ",\n";
  return out;
}

std::string coverage_curves_csv(const BatchReport& report, double step_s) {
  double t_end = 0.0;
  for (const auto& e : report.entries) {
    if (!e.coverage_curve.empty()) t_end = std::max(t_end, e.coverage_curve.back().first);
  }
  std::string out = "t_sim";
  for (const auto& e : report.entries) {
    if (e.summary) out += "," + e.label + "_seed" + std::to_string(e.seed);
  }
  out += "\n";
  const long long steps = static_cast<long long>(std::ceil(t_end / step_s - 1e-9));
  std::vector<std::size_t> at(report.entries.size(), 0);
  for (long long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * step_s;
    out += format_fixed(t, 3);
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
      if (!report.entries[i].summary) continue;
      const auto& curve = report.entries[i].coverage_curve;
      while (at[i] < curve.size() && curve[at[i]].first <= t + 1e-9) ++at[i];
      const double v = at[i] == 0 ? 0.0 : curve[at[i] - 1].second;
      out += "," + format_fixed(v, 6);
    }
    out += "\n";
  }
  return out;
}

std::string timing_table_csv(const BatchReport& report) {
  struct Acc {
    double map = 0, global = 0, local = 0;
    int n = 0;
  };
  std::map<std::string, Acc> by_label;
  for (const auto& e : report.entries) {
    if (!e.summary) continue;
    Acc& a = by_label[e.label];
    a.map += e.summary->mean_map_update_ms;
    a.global += e.summary->mean_global_ms;
    a.local += e.summary->mean_local_ms;
    ++a.n;
  }
  std::string out = "scenario,episodes,map_update_ms,global_path_ms,local_traj_ms,total_ms\n";
  for (const auto& [label, a] : by_label) {
    const double n = a.n;
    out += label + "," + std::to_string(a.n) + "," + format_fixed(a.map / n, 4) + "," +
           format_fixed(a.global / n, 4) + "," + format_fixed(a.local / n, 4) + "," +
           format_fixed((a.map + a.global + a.local) / n, 4) + "\n";
  }
  return out;
}

}  // namespace topoexp
