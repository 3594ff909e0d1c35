#include "topoexp/planner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "topoexp/errors.hpp"

namespace topoexp {

std::string_view to_string(PlanMode mode) { return mode == PlanMode::kShortcut ? "shortcut" : "atsp"; }

std::string_view to_string(StepEventKind kind) {
  switch (kind) {
    case StepEventKind::kArrived:
      return "arrived";
    case StepEventKind::kTargetInvalid:
      return "target_invalid";
    case StepEventKind::kBlocked:
      return "blocked";
  }
  return "unknown";
}

CostMatrix build_cost_matrix(const TopoGraph& g, NodeId current,
                             const std::vector<NodeId>& frontiers) {
  std::vector<NodeId> ids{current};
  ids.insert(ids.end(), frontiers.begin(), frontiers.end());
  CostMatrix c(ids.size());
  std::string unreachable;
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
    const std::vector<NodeId> rest(ids.begin() + static_cast<std::ptrdiff_t>(i) + 1, ids.end());
    const auto costs = shortest_costs(g, ids[i], rest);
    for (std::size_t k = 0; k < rest.size(); ++k) {
      const std::size_t j = i + 1 + k;
      c.at(i, j) = costs[k];
      if (i > 0) c.at(j, i) = costs[k];
      if (i == 0 && !std::isfinite(costs[k])) {
        unreachable += (unreachable.empty() ? "" : ", ") + to_string(ids[j]);
      }
    }
  }
  if (!unreachable.empty()) {
    throw UnreachableError("frontiers unreachable from node " + to_string(current) + ": " +
                           unreachable);
  }
  return c;
}

std::optional<TourPlan> next_target(const TopoGraph& g, NodeId current) {
  const TopoNode& cur = g.node(current);
  const Edge* best = nullptr;
  for (const Edge& e : cur.adj) {
    if (g.node(e.to).is_frontier() && (best == nullptr || e.cost < best->cost)) best = &e;
  }
  if (best != nullptr) return TourPlan{{best->to}, best->cost, PlanMode::kShortcut};

  std::vector<NodeId> frontiers;
  for (NodeId f : g.frontiers()) {
    if (f != current) frontiers.push_back(f);
  }
  if (frontiers.empty()) return std::nullopt;
  const CostMatrix c = build_cost_matrix(g, current, frontiers);
  const AtspTour tour = solve_atsp(c);
  TourPlan plan;
  plan.mode = PlanMode::kAtsp;
  plan.total_cost = tour.cost;
  for (std::size_t k : tour.order) plan.order.push_back(frontiers[k - 1]);
  return plan;
}

void MotionLimits::validate() const {
  if (!(v_max > 0.0)) throw ConfigError("motion.v_max must be > 0");
  if (!(a_max > 0.0)) throw ConfigError("motion.a_max must be > 0");
  if (!(robot_radius > 0.0)) throw ConfigError("motion.robot_radius must be > 0");
}

void ExecutorConfig::validate() const {
  if (!(arrival_tolerance > 0.0)) throw ConfigError("executor.arrival_tolerance must be > 0");
  window.validate();
}

double next_speed(double speed, double remaining, const MotionLimits& limits, double dt) {
  // Largest v1 that can still brake to rest after covering (speed + v1) / 2 * dt.
  const double a = limits.a_max;
  const double slack = std::max(2.0 * a * std::max(remaining, 0.0) - a * dt * speed, 0.0);
  const double braking = 0.5 * (-a * dt + std::sqrt(a * a * dt * dt + 4.0 * slack));
  double v = std::min({speed + a * dt, limits.v_max, braking});
  v = std::max(v, speed - a * dt);
  return std::max(v, 0.0);
}

namespace {

double route_length(const TopoGraph& g, const std::vector<NodeId>& path, std::size_t from) {
  double len = 0.0;
  for (std::size_t k = from; k + 1 < path.size(); ++k) {
    len += planar_distance(g.node(path[k]).position, g.node(path[k + 1]).position);
  }
  return len;
}

double polyline_length(const std::vector<Vec3>& pts) {
  double len = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) len += planar_distance(pts[k - 1], pts[k]);
  return len;
}

}  // namespace

StepResult execute_step(const TopoGraph& g, const RouteCursor& route, const DepthScan& scan,
                        const DepthDescriptor& current_desc, const AgentState& state,
                        const MotionLimits& limits, const ExecutorConfig& config, double dt) {
  if (route.path.empty()) throw ContractViolation("execute_step: empty route");
  StepResult out{state, route, {}, {}};
  const NodeId target = route.target();
  const Vec3 goal = g.node(target).position;
  const Vec3 here = state.position;
  const double tol = config.arrival_tolerance;

  out.state.time += dt;
  if (distance(here, goal) <= tol) {
    out.events.push_back({StepEventKind::kArrived, target});
    return out;
  }
  if (!check_target_validity(g, target, current_desc, here)) {
    out.events.push_back({StepEventKind::kTargetInvalid, target});
    return out;
  }

  const LocalWindow window(here, scan, limits.robot_radius, config.window);
  const auto layer = window.free_layer(here);
  if (!layer) {
    out.state.speed = 0.0;
    out.events.push_back({StepEventKind::kBlocked, target});
    return out;
  }

  std::vector<Vec3> path;
  double remaining = 0.0;
  const std::size_t last = route.path.size() - 1;
  std::size_t next = std::min(route.next, last);
  while (next < last && distance(here, g.node(route.path[next]).position) <= tol) ++next;
  if (*layer != WindowLayer::kHard) {
    // Standing inside an inflated zone: step back into clear space first.
    if (auto out_path = window.escape(here, *layer)) {
      path = std::move(*out_path);
      remaining = polyline_length(path) + planar_distance(path.back(), goal);
    }
  }
  for (std::size_t k = last + 1; path.empty() && k-- > next;) {
    const Vec3 p = g.node(route.path[k]).position;
    if (planar_distance(here, p) < config.window.half_extent && window.straight_free(here, p, *layer)) {
      next = k;
      path = {here, p};
      remaining = planar_distance(here, p) + route_length(g, route.path, k);
    }
  }
  if (path.empty()) {
    const Vec3 p = g.node(route.path[next]).position;
    auto planned = window.plan(here, p, tol, *layer);
    if (!planned || planned->size() < 2) {
      out.state.speed = 0.0;
      out.events.push_back({StepEventKind::kBlocked, target});
      return out;
    }
    path = std::move(*planned);
    remaining = polyline_length(path) + planar_distance(path.back(), p) +
                route_length(g, route.path, next);
  }
  out.route.next = next;

  const double v0 = state.speed;
  const double v1 = next_speed(v0, remaining, limits, dt);
  const double step = 0.5 * (v0 + v1) * dt;
  const Vec3 aim = path[1];
  const double seg = planar_distance(here, aim);
  Vec3 moved_to = aim;
  if (step < seg) {
    const double f = step / seg;
    moved_to = {here.x + (aim.x - here.x) * f, here.y + (aim.y - here.y) * f, here.z};
  }
  moved_to.z = here.z;
  out.state.position = moved_to;
  out.state.speed = v1;
  out.state.travelled += planar_distance(here, moved_to);
  out.local_path = std::move(path);

  if (distance(moved_to, goal) <= tol) out.events.push_back({StepEventKind::kArrived, target});
  return out;
}

}  // namespace topoexp
