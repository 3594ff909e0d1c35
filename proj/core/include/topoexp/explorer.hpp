#pragma once

// Closed-loop exploration: sensing, descriptor-driven graph growth, global
// guidance and one executor period per iteration. The world is consulted
// only to simulate the scan and to score coverage.

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "topoexp/descriptor.hpp"
#include "topoexp/frontier.hpp"
#include "topoexp/planner.hpp"
#include "topoexp/topo_graph.hpp"
#include "topoexp/world.hpp"

namespace topoexp {

// Replaces the ranges of one azimuth band in the scan of one iteration.
struct ScriptedFault {
  long long iteration = 0;
  RayOverride ray;
};

struct ExplorerConfig {
  DescriptorConfig descriptor;
  FrontierConfig frontier;
  SensorModel sensor;
  MotionLimits motion;
  ExecutorConfig executor;
  double dt = 0.25;
  int blocked_limit = 3;     // consecutive blocked periods before a target is dropped
  double stall_time = 30.0;  // seconds without progress before a target is dropped
  int replans_per_iteration = 8;
  std::uint64_t seed = 1;
  std::vector<ScriptedFault> faults;
  bool wall_timing = true;

  // Throws ConfigError on the first violated bound.
  void validate() const;
};

struct IterationMetrics {
  long long iter = 0;
  double t_sim = 0.0;
  double t_map_update_ms = 0.0;
  double t_global_ms = 0.0;
  double t_local_ms = 0.0;
  double coverage = 0.0;
  std::size_t nodes = 0;
  std::size_t frontiers = 0;
  std::size_t edges = 0;
  std::size_t graph_bytes = 0;
  double traj_len_m = 0.0;
  std::optional<PlanMode> plan_mode;  // set when a plan was computed this iteration
  bool terminated = false;

  double total_ms() const { return t_map_update_ms + t_global_ms + t_local_ms; }
};

enum class ExplorerEventKind { kConverted, kInserted, kTargetInvalid, kBlocked, kAbandoned };

std::string_view to_string(ExplorerEventKind kind);

struct ExplorerEvent {
  long long iter = 0;
  ExplorerEventKind kind = ExplorerEventKind::kConverted;
  NodeId node;
};

// Every candidate position produced at a waypoint, kept or discarded.
struct CandidateRecord {
  long long iter = 0;
  std::uint64_t seq = 0;  // global order of graph changes
  NodeId generator;
  Vec3 position;
  IntervalKind kind = IntervalKind::kMissingDepth;
  std::optional<NodeId> inserted;
};

struct TrajectorySample {
  double t = 0.0;
  Vec3 position;
  double speed = 0.0;
};

class Explorer {
 public:
  Explorer(const WorldMap& world, const Vec3& start, ExplorerConfig config);

  // One planning iteration. Returns its metrics row; no-op once terminated.
  const IterationMetrics& step();

  bool terminated() const { return terminated_; }
  const TopoGraph& graph() const { return graph_; }
  const AgentState& agent() const { return agent_; }
  const ExplorerConfig& config() const { return config_; }
  const std::vector<IterationMetrics>& metrics() const { return metrics_; }
  const std::vector<ExplorerEvent>& events() const { return events_; }
  const std::vector<CandidateRecord>& candidates() const { return candidates_; }
  const std::vector<TrajectorySample>& trajectory() const { return trajectory_; }
  // Sequence number at which each waypoint got its descriptor.
  const std::map<NodeId, std::uint64_t>& waypoint_seq() const { return waypoint_seq_; }
  double coverage() const { return coverage_.fraction(); }

 private:
  void grow_graph(NodeId current, const DepthDescriptor& desc, std::optional<double> last_heading);
  bool replan();
  void drop_target(ExplorerEventKind why);
  void log(ExplorerEventKind kind, NodeId node);

  const WorldMap* world_;
  ExplorerConfig config_;
  TopoGraph graph_;
  CoverageTracker coverage_;
  AgentState agent_;
  std::optional<NodeId> anchor_;
  std::optional<TourPlan> plan_;
  RouteCursor route_;
  bool need_plan_ = true;
  int blocked_streak_ = 0;
  NodeId streak_target_{~std::uint32_t{0}};
  double best_gap_ = 0.0;
  double last_progress_t_ = 0.0;
  bool terminated_ = false;
  std::uint64_t seq_ = 0;

  std::vector<IterationMetrics> metrics_;
  std::vector<ExplorerEvent> events_;
  std::vector<CandidateRecord> candidates_;
  std::vector<TrajectorySample> trajectory_;
  std::map<NodeId, std::uint64_t> waypoint_seq_;
};

}  // namespace topoexp
