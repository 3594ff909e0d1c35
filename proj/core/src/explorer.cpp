#include "topoexp/explorer.hpp"

#include <chrono>
#include <cmath>

#include "topoexp/errors.hpp"
#include "topoexp/random.hpp"

namespace topoexp {

namespace {

class PhaseTimer {
 public:
  explicit PhaseTimer(bool enabled) : enabled_(enabled), start_(Clock::now()) {}

  double elapsed_ms() const {
    if (!enabled_) return 0.0;
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  bool enabled_;
  Clock::time_point start_;
};

constexpr double kProgressStep = 0.1;

}  // namespace

std::string_view to_string(ExplorerEventKind kind) {
  switch (kind) {
    case ExplorerEventKind::kConverted:
      return "converted";
    case ExplorerEventKind::kInserted:
      return "inserted";
    case ExplorerEventKind::kTargetInvalid:
      return "target_invalid";
    case ExplorerEventKind::kBlocked:
      return "blocked";
    case ExplorerEventKind::kAbandoned:
      return "abandoned";
  }
  return "unknown";
}

void ExplorerConfig::validate() const {
  descriptor.validate();
  frontier.validate(descriptor);
  sensor.validate(descriptor.sectors());
  motion.validate();
  executor.validate();
  if (sensor.d_max != descriptor.d_max) throw ConfigError("sensor and descriptor d_max differ");
  if (sensor.h != descriptor.h) throw ConfigError("sensor and descriptor h differ");
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (blocked_limit < 1) throw ConfigError("blocked_limit must be >= 1");
  if (!(stall_time > 0.0)) throw ConfigError("stall_time must be > 0");
  if (replans_per_iteration < 1) throw ConfigError("replans_per_iteration must be >= 1");
  for (const ScriptedFault& f : faults) {
    if (f.iteration < 0) throw ConfigError("fault iteration must be >= 0");
    if (!(f.ray.azimuth_lo_deg < f.ray.azimuth_hi_deg)) {
      throw ConfigError("fault azimuth band must have lo < hi");
    }
    if (!(f.ray.range > 0.0)) throw ConfigError("fault range must be > 0");
  }
}

Explorer::Explorer(const WorldMap& world, const Vec3& start, ExplorerConfig config)
    : world_(&world),
      config_(std::move(config)),
      graph_(config_.descriptor),
      coverage_(world, config_.sensor.d_max) {
  config_.validate();
  config_.executor.window.angular_bins = config_.sensor.rays_per_rev;
  if (world.occupied_at(start.x, start.y)) {
    throw InvalidPoseError("start position lies in an occupied cell");
  }
  agent_.position = start;
  trajectory_.push_back({0.0, start, 0.0});
}

void Explorer::log(ExplorerEventKind kind, NodeId node) {
  events_.push_back({static_cast<long long>(metrics_.size()), kind, node});
}

void Explorer::grow_graph(NodeId current, const DepthDescriptor& desc,
                          std::optional<double> last_heading) {
  const Vec3 origin = graph_.node(current).position;
  auto intervals = find_intervals(desc, config_.frontier);
  intervals = split_large(intervals, config_.descriptor, config_.frontier);
  if (last_heading) intervals = filter_by_last_heading(intervals, *last_heading, config_.descriptor);
  const auto cands = candidate_positions(desc, intervals, origin, config_.frontier);
  for (const Candidate& c : cands) {
    CandidateRecord rec;
    rec.iter = static_cast<long long>(metrics_.size());
    rec.seq = seq_++;
    rec.generator = current;
    rec.position = c.position;
    rec.kind = c.kind;
    const auto ids = select_and_insert_frontiers(graph_, current, std::span(&c.position, 1));
    if (!ids.empty()) {
      rec.inserted = ids.front();
      log(ExplorerEventKind::kInserted, ids.front());
      need_plan_ = true;
    }
    candidates_.push_back(rec);
  }
  update_connectivity(graph_, current);
}

bool Explorer::replan() {
  need_plan_ = false;
  plan_ = next_target(graph_, *anchor_);
  if (!plan_) return false;
  route_.path = astar_cost(graph_, *anchor_, plan_->order.front()).path;
  route_.next = 0;
  if (route_.target() != streak_target_) blocked_streak_ = 0;
  streak_target_ = route_.target();
  best_gap_ = distance(agent_.position, graph_.node(route_.target()).position);
  last_progress_t_ = agent_.time;
  return true;
}

void Explorer::drop_target(ExplorerEventKind why) {
  const NodeId target = route_.target();
  remove_invalid_node(graph_, target);
  log(why, target);
  plan_.reset();
  need_plan_ = true;
}

const IterationMetrics& Explorer::step() {
  if (terminated_) return metrics_.back();
  const long long iter = static_cast<long long>(metrics_.size());
  const double t_start = agent_.time;
  IterationMetrics m;
  m.iter = iter;

  std::vector<RayOverride> overrides;
  for (const ScriptedFault& f : config_.faults) {
    if (f.iteration == iter) overrides.push_back(f.ray);
  }
  const Pose pose{agent_.position, agent_.heading};
  const DepthScan scan = raycast_scan(*world_, config_.sensor, pose,
                                      mix_seed(config_.seed, static_cast<std::uint64_t>(iter)),
                                      overrides, agent_.time);
  coverage_.add_pose(agent_.position);

  std::optional<DepthDescriptor> desc;
  {
    const PhaseTimer timer(config_.wall_timing);
    desc = build_descriptor(extract_valid_points(scan, config_.descriptor), config_.descriptor);
    if (!anchor_) {
      const NodeId id = graph_.add_waypoint(agent_.position, *desc);
      waypoint_seq_[id] = seq_++;
      log(ExplorerEventKind::kConverted, id);
      anchor_ = id;
      grow_graph(id, *desc, std::nullopt);
      need_plan_ = true;
    } else {
      const double tol = config_.executor.arrival_tolerance;
      std::optional<NodeId> reached;
      double reached_d = tol;
      for (NodeId id : graph_.nodes_within(agent_.position, tol * (1.0 + 1e-9))) {
        const TopoNode& n = graph_.node(id);
        const double d = distance(n.position, agent_.position);
        if (n.is_frontier() && d <= reached_d && (!reached || d < reached_d)) {
          reached = id;
          reached_d = d;
        }
      }
      if (reached) {
        std::optional<double> last_heading;
        if (graph_.node(*anchor_).is_waypoint()) {
          last_heading = bearing(agent_.position, graph_.node(*anchor_).position);
        }
        convert_to_waypoint(graph_, *reached, *desc, agent_.position);
        waypoint_seq_[*reached] = seq_++;
        log(ExplorerEventKind::kConverted, *reached);
        anchor_ = *reached;
        grow_graph(*reached, *desc, last_heading);
        need_plan_ = true;
      }
    }
    m.t_map_update_ms = timer.elapsed_ms();
  }

  if (graph_.frontiers().empty()) {
    terminated_ = true;
    plan_.reset();
  } else {
    bool atsp = false;
    bool planned = false;
    auto plan_now = [&] {
      const PhaseTimer timer(config_.wall_timing);
      const bool ok = replan();
      m.t_global_ms += timer.elapsed_ms();
      if (ok) {
        planned = true;
        atsp = atsp || plan_->mode == PlanMode::kAtsp;
      }
      return ok;
    };
    if (plan_ && !graph_.contains(route_.target())) need_plan_ = true;
    if (need_plan_ || !plan_) plan_now();

    for (int attempt = 0; attempt < config_.replans_per_iteration && plan_; ++attempt) {
      StepResult res;
      {
        const PhaseTimer timer(config_.wall_timing);
        res = execute_step(graph_, route_, scan, *desc, agent_, config_.motion, config_.executor,
                           config_.dt);
        m.t_local_ms += timer.elapsed_ms();
      }
      const bool invalid = !res.events.empty() && res.events.front().kind == StepEventKind::kTargetInvalid;
      if (invalid) {
        drop_target(ExplorerEventKind::kTargetInvalid);
        if (graph_.frontiers().empty() || !plan_now()) break;
        continue;
      }
      for (std::size_t k = 0; k < res.route.next && k < res.route.path.size(); ++k) {
        if (graph_.node(res.route.path[k]).is_waypoint()) anchor_ = res.route.path[k];
      }
      agent_ = res.state;
      route_ = res.route;
      const bool blocked = !res.events.empty() && res.events.front().kind == StepEventKind::kBlocked;
      if (blocked) {
        log(ExplorerEventKind::kBlocked, route_.target());
        if (++blocked_streak_ >= config_.blocked_limit) drop_target(ExplorerEventKind::kAbandoned);
        else need_plan_ = true;
      } else {
        blocked_streak_ = 0;
        const double gap = distance(agent_.position, graph_.node(route_.target()).position);
        if (gap < best_gap_ - kProgressStep) {
          best_gap_ = gap;
          last_progress_t_ = agent_.time;
        } else if (agent_.time - last_progress_t_ > config_.stall_time) {
          drop_target(ExplorerEventKind::kAbandoned);
        }
      }
      break;
    }
    if (planned) m.plan_mode = atsp ? PlanMode::kAtsp : PlanMode::kShortcut;
  }

  agent_.time = t_start + config_.dt;
  agent_.speed = terminated_ ? 0.0 : agent_.speed;
  trajectory_.push_back({agent_.time, agent_.position, agent_.speed});

  m.t_sim = agent_.time;
  m.coverage = coverage_.fraction();
  m.nodes = graph_.node_count();
  m.frontiers = graph_.frontiers().size();
  m.edges = graph_.edge_count();
  m.graph_bytes = graph_memory_bytes(graph_);
  m.traj_len_m = agent_.travelled;
  m.terminated = terminated_;
  metrics_.push_back(m);
  return metrics_.back();
}

}  // namespace topoexp
