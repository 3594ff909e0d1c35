#pragma once

// Episode and batch drivers plus their CSV/text artifacts.

#include <optional>
#include <string>
#include <vector>

#include "topoexp/config.hpp"
#include "topoexp/explorer.hpp"
#include "topoexp/map_gen.hpp"

namespace topoexp {

enum class EpisodeStatus { kComplete = 0, kBudgetExhausted = 2 };

struct EpisodeSummary {
  bool terminated = false;
  long long iterations = 0;
  double sim_time_s = 0.0;
  double traj_len_m = 0.0;
  double coverage = 0.0;
  std::size_t peak_graph_bytes = 0;
  std::size_t final_graph_bytes = 0;
  std::size_t nodes = 0;
  std::size_t waypoints = 0;
  std::size_t edges = 0;
  double mean_map_update_ms = 0.0;
  double mean_global_ms = 0.0;
  double mean_local_ms = 0.0;
  double mean_total_ms = 0.0;
  double wall_time_s = 0.0;
};

struct EpisodeLog {
  std::vector<IterationMetrics> rows;
  EpisodeSummary summary;
  std::string graph_text;
  std::vector<TrajectorySample> trajectory;
  std::vector<ExplorerEvent> events;
  std::vector<CandidateRecord> candidates;
  std::map<NodeId, std::uint64_t> waypoint_seq;

  EpisodeStatus status() const {
    return summary.terminated ? EpisodeStatus::kComplete : EpisodeStatus::kBudgetExhausted;
  }
};

// Loads or generates the configured world. Throws ConfigError or FormatError.
Fixture resolve_world(const EpisodeConfig& config);

// ceil(50 x free area / d_max^2).
long long iteration_budget(const WorldMap& world, double d_max);

// Validates, runs to termination or the iteration budget and, when
// output_dir is set, writes the artifacts there.
EpisodeLog run_episode(const EpisodeConfig& config);
EpisodeLog run_episode(const EpisodeConfig& config, const Fixture& fixture);

void write_artifacts(const EpisodeConfig& config, const Fixture& fixture, const EpisodeLog& log);

std::string metrics_csv(const std::vector<IterationMetrics>& rows);
std::string candidates_csv(const std::vector<CandidateRecord>& rows);
std::string trajectory_csv(const std::vector<TrajectorySample>& rows);
std::string events_csv(const std::vector<ExplorerEvent>& rows);
// "explored: complete in 71.5 s sim, trajectory 29.8 m, coverage 0.981, ..."
std::string summary_line(const EpisodeSummary& s);

struct BatchEntry {
  std::string label;
  std::uint64_t seed = 0;
  std::optional<EpisodeSummary> summary;
  std::string error;
  std::vector<std::pair<double, double>> coverage_curve;  // (t_sim, coverage)
};

struct BatchReport {
  std::vector<BatchEntry> entries;
};

// Episodes run on up to `jobs` threads; a failing episode is recorded and the
// rest still run. Each episode with output_dir set writes to its own
// <output_dir>/<label>_seed<seed> subdirectory.
BatchReport run_batch(const std::vector<EpisodeConfig>& configs, int jobs);

// Per-episode rows followed by mean and sample-std rows over successful ones.
std::string batch_summary_csv(const BatchReport& report);
// Column t_sim then one coverage column per completed episode, sampled on a common grid.
std::string coverage_curves_csv(const BatchReport& report, double step_s);
// Mean per-phase latency by scenario: map update, global path, local trajectory, total.
std::string timing_table_csv(const BatchReport& report);

std::string episode_label(const EpisodeConfig& config);

}  // namespace topoexp
