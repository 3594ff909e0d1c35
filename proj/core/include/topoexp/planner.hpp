#pragma once

// Global guidance (nearest adjacent frontier, otherwise an open ATSP tour over
// graph A* costs) and the window-constrained kinematic executor.

#include <optional>
#include <string_view>
#include <vector>

#include "topoexp/atsp.hpp"
#include "topoexp/local_window.hpp"
#include "topoexp/topo_graph.hpp"

namespace topoexp {

enum class PlanMode { kShortcut, kAtsp };

std::string_view to_string(PlanMode mode);

struct TourPlan {
  std::vector<NodeId> order;
  double total_cost = 0.0;
  PlanMode mode = PlanMode::kShortcut;
};

// Row/column 0 is `current`, then `frontiers` in order. Entries are graph
// costs; the return column is zero. Throws UnreachableError naming node ids.
CostMatrix build_cost_matrix(const TopoGraph& g, NodeId current, const std::vector<NodeId>& frontiers);

// nullopt when no frontier remains besides `current`.
std::optional<TourPlan> next_target(const TopoGraph& g, NodeId current);

struct MotionLimits {
  double v_max = 2.0;
  double a_max = 2.0;
  double robot_radius = 0.2;

  void validate() const;
};

struct AgentState {
  Vec3 position;
  double speed = 0.0;
  double heading = 0.0;  // fixed; sensing is omnidirectional
  double time = 0.0;
  double travelled = 0.0;
};

struct ExecutorConfig {
  double arrival_tolerance = 0.3;
  LocalWindowConfig window;

  void validate() const;
};

// Graph route being followed; path.back() is the plan target.
struct RouteCursor {
  std::vector<NodeId> path;
  std::size_t next = 0;  // route nodes before this index are behind the agent

  NodeId target() const { return path.back(); }
};

enum class StepEventKind { kArrived, kTargetInvalid, kBlocked };

std::string_view to_string(StepEventKind kind);

struct StepEvent {
  StepEventKind kind;
  NodeId node;
};

struct StepResult {
  AgentState state;
  RouteCursor route;
  std::vector<StepEvent> events;
  std::vector<Vec3> local_path;  // polyline actually followed this step
};

// One control period. The target is checked against the current descriptor
// first; the agent then heads for the furthest route node visible in the
// window, or along a window grid path when none is, under a trapezoidal speed
// profile towards the end of the route.
StepResult execute_step(const TopoGraph& g, const RouteCursor& route, const DepthScan& scan,
                        const DepthDescriptor& current_desc, const AgentState& state,
                        const MotionLimits& limits, const ExecutorConfig& config, double dt);

// Scalar speed after one period with `remaining` metres to go.
double next_speed(double speed, double remaining, const MotionLimits& limits, double dt);

}  // namespace topoexp
