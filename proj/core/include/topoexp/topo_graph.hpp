#pragma once

// Sparse undirected topological graph. Waypoints (visited) carry a depth
// descriptor; frontiers (unvisited) carry only a position. Edge cost is the
// Euclidean distance between endpoints.

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topoexp/descriptor.hpp"
#include "topoexp/geometry.hpp"

namespace topoexp {

struct NodeId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

std::string to_string(NodeId id);

enum class NodeType { kWaypoint, kFrontier };

std::string_view to_string(NodeType type);

struct Edge {
  NodeId to;
  double cost = 0.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct TopoNode {
  NodeId id;
  NodeType type = NodeType::kFrontier;
  Vec3 position;
  std::optional<DepthDescriptor> descriptor;  // present iff WAYPOINT
  std::vector<Edge> adj;                      // sorted by neighbour id

  bool is_waypoint() const { return type == NodeType::kWaypoint; }
  bool is_frontier() const { return type == NodeType::kFrontier; }
  friend bool operator==(const TopoNode&, const TopoNode&) = default;
};

// Uniform hash grid over the plane. Radius queries return exactly the ids
// within the radius (cell superset, then distance filter by the caller).
class SpatialHash {
 public:
  explicit SpatialHash(double cell_size) : cell_size_(cell_size) {}

  void insert(NodeId id, const Vec3& p);
  void erase(NodeId id, const Vec3& p);
  // Ids in every cell touching the square of half-size r around p, sorted.
  std::vector<NodeId> candidates(const Vec3& p, double r) const;

 private:
  using Key = std::pair<int, int>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::int64_t>()((static_cast<std::int64_t>(k.first) << 32) ^
                                       static_cast<std::uint32_t>(k.second));
    }
  };
  Key key_of(double x, double y) const;

  double cell_size_;
  std::unordered_map<Key, std::vector<NodeId>, KeyHash> cells_;
};

class TopoGraph {
 public:
  explicit TopoGraph(const DescriptorConfig& config);

  const DescriptorConfig& config() const { return config_; }
  double d_max() const { return config_.d_max; }

  NodeId add_waypoint(const Vec3& position, DepthDescriptor descriptor);
  NodeId add_frontier(const Vec3& position);

  // Adds (a, b) with Euclidean cost; false if present or a == b.
  bool add_edge(NodeId a, NodeId b);
  bool has_edge(NodeId a, NodeId b) const;

  bool contains(NodeId id) const { return nodes_.count(id) != 0; }
  // Throws ContractViolation for unknown ids.
  const TopoNode& node(NodeId id) const;
  const std::map<NodeId, TopoNode>& nodes() const { return nodes_; }
  const std::set<NodeId>& frontiers() const { return frontiers_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t waypoint_count() const { return nodes_.size() - frontiers_.size(); }
  std::uint32_t next_id() const { return next_id_; }

  // Ids whose Euclidean distance to p is strictly below r, ascending.
  std::vector<NodeId> nodes_within(const Vec3& p, double r) const;

  // Structural audit: adjacency symmetry, cost == Euclidean distance,
  // frontier index exactness, descriptor presence by type, spatial index.
  // Throws ContractViolation naming the broken invariant.
  void audit() const;

  // Equality of nodes, edges and id counter; indexes are derived state.
  friend bool operator==(const TopoGraph& a, const TopoGraph& b) {
    return a.config_ == b.config_ && a.next_id_ == b.next_id_ && a.nodes_ == b.nodes_;
  }

 private:
  friend void convert_to_waypoint(TopoGraph&, NodeId, DepthDescriptor, const Vec3&);
  friend void remove_invalid_node(TopoGraph&, NodeId);
  friend TopoGraph deserialize(std::string_view);

  TopoNode& mutable_node(NodeId id);
  NodeId insert_node(NodeType type, const Vec3& position, std::optional<DepthDescriptor> desc);

  DescriptorConfig config_;
  std::map<NodeId, TopoNode> nodes_;
  std::set<NodeId> frontiers_;
  SpatialHash spatial_;
  std::uint32_t next_id_ = 0;
  std::size_t edge_count_ = 0;
};

double edge_cost(const Vec3& a, const Vec3& b);

// Discards a candidate when any historical waypoint other than `current`
// within d_max covers it; inserts the rest as frontiers joined to `current`.
std::vector<NodeId> select_and_insert_frontiers(TopoGraph& g, NodeId current,
                                                std::span<const Vec3> candidates);

void convert_to_waypoint(TopoGraph& g, NodeId id, DepthDescriptor desc,
                         const Vec3& observed_position);

// Adds edges from `current` to every node within d_max that its descriptor
// sees; returns the new (current, other) pairs.
std::vector<std::pair<NodeId, NodeId>> update_connectivity(TopoGraph& g, NodeId current);

void remove_invalid_node(TopoGraph& g, NodeId id);

// Valid iff the current frame's descriptor covers the target; targets at or
// beyond d_max are not judged and count as valid.
bool check_target_validity(const TopoGraph& g, NodeId target, const DepthDescriptor& current_desc,
                           const Vec3& current_pos);

struct PathResult {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<NodeId> path;
  bool reachable() const { return cost != std::numeric_limits<double>::infinity(); }
};

// A* over edge costs with the straight-line distance to b as heuristic.
PathResult astar_cost(const TopoGraph& g, NodeId a, NodeId b);

// Shortest path costs from `source` to each of `targets` (infinity when
// unreachable) in one uniform-cost search; equal to astar_cost per pair.
std::vector<double> shortest_costs(const TopoGraph& g, NodeId source,
                                   const std::vector<NodeId>& targets);

std::string serialize(const TopoGraph& g);
// Throws FormatError with the line number.
TopoGraph deserialize(std::string_view text);

// Accounted bytes: fixed header, a fixed record per node, n depth entries per
// descriptor and one record per undirected edge.
std::size_t graph_memory_bytes(const TopoGraph& g);

struct GraphMemoryLayout {
  static constexpr std::size_t kHeader = 64;
  static constexpr std::size_t kNodeRecord = 48;  // id, type, position, adjacency handle
  static constexpr std::size_t kEdgeRecord = 2 * sizeof(Edge);  // stored at both ends
};

}  // namespace topoexp

template <>
struct std::hash<topoexp::NodeId> {
  std::size_t operator()(const topoexp::NodeId& id) const noexcept {
    return std::hash<std::uint32_t>()(id.value);
  }
};
