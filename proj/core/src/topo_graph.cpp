#include "topoexp/topo_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "topoexp/errors.hpp"
#include "topoexp/text_util.hpp"

namespace topoexp {

namespace {

void insert_sorted(std::vector<Edge>& adj, Edge e) {
  const auto it = std::lower_bound(adj.begin(), adj.end(), e.to,
                                   [](const Edge& x, NodeId id) { return x.to < id; });
  adj.insert(it, e);
}

Edge* find_edge(std::vector<Edge>& adj, NodeId to) {
  const auto it = std::lower_bound(adj.begin(), adj.end(), to,
                                   [](const Edge& x, NodeId id) { return x.to < id; });
  return it != adj.end() && it->to == to ? &*it : nullptr;
}

FormatError graph_error(std::size_t line_no, const std::string& what) {
  return FormatError("graph line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::string to_string(NodeId id) { return std::to_string(id.value); }

std::string_view to_string(NodeType type) {
  return type == NodeType::kWaypoint ? "WAYPOINT" : "FRONTIER";
}

double edge_cost(const Vec3& a, const Vec3& b) { return distance(a, b); }

SpatialHash::Key SpatialHash::key_of(double x, double y) const {
  return {static_cast<int>(std::floor(x / cell_size_)), static_cast<int>(std::floor(y / cell_size_))};
}

void SpatialHash::insert(NodeId id, const Vec3& p) { cells_[key_of(p.x, p.y)].push_back(id); }

void SpatialHash::erase(NodeId id, const Vec3& p) {
  const auto it = cells_.find(key_of(p.x, p.y));
  if (it == cells_.end()) return;
  auto& v = it->second;
  v.erase(std::remove(v.begin(), v.end(), id), v.end());
  if (v.empty()) cells_.erase(it);
}

std::vector<NodeId> SpatialHash::candidates(const Vec3& p, double r) const {
  const Key lo = key_of(p.x - r, p.y - r);
  const Key hi = key_of(p.x + r, p.y + r);
  std::vector<NodeId> out;
  for (int cx = lo.first; cx <= hi.first; ++cx) {
    for (int cy = lo.second; cy <= hi.second; ++cy) {
      const auto it = cells_.find({cx, cy});
      if (it != cells_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

TopoGraph::TopoGraph(const DescriptorConfig& config) : config_(config), spatial_(config.d_max) {}

NodeId TopoGraph::insert_node(NodeType type, const Vec3& position,
                              std::optional<DepthDescriptor> desc) {
  const NodeId id{next_id_++};
  TopoNode node;
  node.id = id;
  node.type = type;
  node.position = position;
  node.descriptor = std::move(desc);
  nodes_.emplace(id, std::move(node));
  if (type == NodeType::kFrontier) frontiers_.insert(id);
  spatial_.insert(id, position);
  return id;
}

NodeId TopoGraph::add_waypoint(const Vec3& position, DepthDescriptor descriptor) {
  return insert_node(NodeType::kWaypoint, position, std::move(descriptor));
}

NodeId TopoGraph::add_frontier(const Vec3& position) {
  return insert_node(NodeType::kFrontier, position, std::nullopt);
}

const TopoNode& TopoGraph::node(NodeId id) const {
  const auto it = nodes_.find(id);
  if (it == nodes_.end()) throw ContractViolation("unknown node id " + to_string(id));
  return it->second;
}

TopoNode& TopoGraph::mutable_node(NodeId id) {
  const auto it = nodes_.find(id);
  if (it == nodes_.end()) throw ContractViolation("unknown node id " + to_string(id));
  return it->second;
}

bool TopoGraph::add_edge(NodeId a, NodeId b) {
  if (a == b) return false;
  TopoNode& na = mutable_node(a);
  TopoNode& nb = mutable_node(b);
  if (find_edge(na.adj, b) != nullptr) return false;
  const double cost = edge_cost(na.position, nb.position);
  insert_sorted(na.adj, {b, cost});
  insert_sorted(nb.adj, {a, cost});
  ++edge_count_;
  return true;
}

bool TopoGraph::has_edge(NodeId a, NodeId b) const {
  const auto& adj = node(a).adj;
  return std::binary_search(adj.begin(), adj.end(), Edge{b, 0.0},
                            [](const Edge& x, const Edge& y) { return x.to < y.to; });
}

std::vector<NodeId> TopoGraph::nodes_within(const Vec3& p, double r) const {
  std::vector<NodeId> out;
  for (NodeId id : spatial_.candidates(p, r)) {
    if (distance(node(id).position, p) < r) out.push_back(id);
  }
  return out;
}

void TopoGraph::audit() const {
  std::size_t half_edges = 0;
  for (const auto& [id, n] : nodes_) {
    if (n.id != id) throw ContractViolation("node record id mismatch at " + to_string(id));
    if (n.is_waypoint() != n.descriptor.has_value()) {
      throw ContractViolation("descriptor presence does not match type of node " + to_string(id));
    }
    if (n.is_frontier() != (frontiers_.count(id) != 0)) {
      throw ContractViolation("frontier index out of sync at node " + to_string(id));
    }
    for (std::size_t k = 0; k < n.adj.size(); ++k) {
      const Edge& e = n.adj[k];
      if (k > 0 && !(n.adj[k - 1].to < e.to)) {
        throw ContractViolation("adjacency of " + to_string(id) + " not strictly sorted");
      }
      const auto other = nodes_.find(e.to);
      if (other == nodes_.end()) {
        throw ContractViolation("edge " + to_string(id) + "-" + to_string(e.to) + " dangles");
      }
      const auto& back = other->second.adj;
      const auto it = std::find_if(back.begin(), back.end(), [&](const Edge& x) { return x.to == id; });
      if (it == back.end() || it->cost != e.cost) {
        throw ContractViolation("edge " + to_string(id) + "-" + to_string(e.to) + " not symmetric");
      }
      if (e.cost != edge_cost(n.position, other->second.position)) {
        throw ContractViolation("edge " + to_string(id) + "-" + to_string(e.to) +
                                " cost differs from Euclidean distance");
      }
      ++half_edges;
    }
    const auto near = spatial_.candidates(n.position, 0.0);
    if (!std::binary_search(near.begin(), near.end(), id)) {
      throw ContractViolation("spatial index misses node " + to_string(id));
    }
  }
  for (NodeId f : frontiers_) {
    if (nodes_.count(f) == 0) throw ContractViolation("frontier index holds removed id");
  }
  if (half_edges != 2 * edge_count_) throw ContractViolation("edge count out of sync");
}

std::vector<NodeId> select_and_insert_frontiers(TopoGraph& g, NodeId current,
                                                std::span<const Vec3> candidates) {
  const TopoNode& cur = g.node(current);
  if (!cur.is_waypoint()) {
    throw ContractViolation("select_and_insert_frontiers: node " + to_string(current) +
                            " is not a waypoint");
  }
  std::vector<NodeId> inserted;
  for (const Vec3& w : candidates) {
    bool observed = false;
    for (NodeId id : g.nodes_within(w, g.d_max())) {
      if (id == current) continue;
      const TopoNode& n = g.node(id);
      if (n.is_waypoint() && covers_point(*n.descriptor, n.position, w)) {
        observed = true;
        break;
      }
    }
    if (observed) continue;
    const NodeId f = g.add_frontier(w);
    g.add_edge(current, f);
    inserted.push_back(f);
  }
  return inserted;
}

void convert_to_waypoint(TopoGraph& g, NodeId id, DepthDescriptor desc,
                         const Vec3& observed_position) {
  TopoNode& n = g.mutable_node(id);
  if (!n.is_frontier()) {
    throw ContractViolation("convert_to_waypoint: node " + to_string(id) + " is not a frontier");
  }
  g.spatial_.erase(id, n.position);
  n.type = NodeType::kWaypoint;
  n.position = observed_position;
  n.descriptor = std::move(desc);
  g.frontiers_.erase(id);
  g.spatial_.insert(id, n.position);
  for (Edge& e : n.adj) {
    TopoNode& other = g.mutable_node(e.to);
    e.cost = edge_cost(n.position, other.position);
    find_edge(other.adj, id)->cost = e.cost;
  }
}

std::vector<std::pair<NodeId, NodeId>> update_connectivity(TopoGraph& g, NodeId current) {
  const TopoNode& cur = g.node(current);
  if (!cur.is_waypoint()) {
    throw ContractViolation("update_connectivity: node " + to_string(current) +
                            " is not a waypoint");
  }
  const Vec3 origin = cur.position;
  const DepthDescriptor& desc = *cur.descriptor;
  std::vector<std::pair<NodeId, NodeId>> added;
  for (NodeId id : g.nodes_within(origin, g.d_max())) {
    if (id == current || g.has_edge(current, id)) continue;
    if (covers_point(desc, origin, g.node(id).position)) {
      g.add_edge(current, id);
      added.emplace_back(current, id);
    }
  }
  return added;
}

void remove_invalid_node(TopoGraph& g, NodeId id) {
  TopoNode& n = g.mutable_node(id);
  if (!n.is_frontier()) {
    throw ContractViolation("remove_invalid_node: node " + to_string(id) +
                            " is a waypoint; only frontiers are corrected");
  }
  for (const Edge& e : n.adj) {
    auto& back = g.mutable_node(e.to).adj;
    back.erase(std::remove_if(back.begin(), back.end(), [&](const Edge& x) { return x.to == id; }),
               back.end());
    --g.edge_count_;
  }
  g.spatial_.erase(id, n.position);
  g.frontiers_.erase(id);
  g.nodes_.erase(id);
}

bool check_target_validity(const TopoGraph& g, NodeId target, const DepthDescriptor& current_desc,
                           const Vec3& current_pos) {
  const Vec3& p = g.node(target).position;
  if (!(distance(p, current_pos) < current_desc.config().d_max)) return true;
  return covers_point(current_desc, current_pos, p);
}

PathResult astar_cost(const TopoGraph& g, NodeId a, NodeId b) {
  const Vec3 goal = g.node(b).position;
  g.node(a);  // validates a
  PathResult result;
  if (a == b) {
    result.cost = 0.0;
    result.path = {a};
    return result;
  }
  using Entry = std::tuple<double, double, NodeId>;  // f, g, id
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::unordered_map<NodeId, double> best;
  std::unordered_map<NodeId, NodeId> parent;
  best[a] = 0.0;
  open.emplace(distance(g.node(a).position, goal), 0.0, a);
  while (!open.empty()) {
    const auto [f, cost, id] = open.top();
    open.pop();
    if (cost > best[id]) continue;
    if (id == b) {
      result.cost = cost;
      for (NodeId at = b; at != a; at = parent.at(at)) result.path.push_back(at);
      result.path.push_back(a);
      std::reverse(result.path.begin(), result.path.end());
      return result;
    }
    for (const Edge& e : g.node(id).adj) {
      const double next = cost + e.cost;
      const auto it = best.find(e.to);
      if (it == best.end() || next < it->second) {
        best[e.to] = next;
        parent[e.to] = id;
        open.emplace(next + distance(g.node(e.to).position, goal), next, e.to);
      }
    }
  }
  return result;
}

std::vector<double> shortest_costs(const TopoGraph& g, NodeId source,
                                   const std::vector<NodeId>& targets) {
  g.node(source);
  std::unordered_map<NodeId, std::size_t> wanted;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    g.node(targets[k]);
    wanted.emplace(targets[k], k);
  }
  std::vector<double> out(targets.size(), std::numeric_limits<double>::infinity());
  std::size_t left = wanted.size();
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::unordered_map<NodeId, double> best;
  best[source] = 0.0;
  open.emplace(0.0, source);
  while (!open.empty() && left > 0) {
    const auto [cost, id] = open.top();
    open.pop();
    if (cost > best[id]) continue;
    if (const auto it = wanted.find(id); it != wanted.end()) {
      out[it->second] = cost;
      wanted.erase(it);
      --left;
    }
    for (const Edge& e : g.node(id).adj) {
      const double next = cost + e.cost;
      const auto b = best.find(e.to);
      if (b == best.end() || next < b->second) {
        best[e.to] = next;
        open.emplace(next, e.to);
      }
    }
  }
  return out;
}

std::string serialize(const TopoGraph& g) {
  const auto& c = g.config();
  std::string out = "topograph next_id=" + std::to_string(g.next_id()) +
                    " theta=" + text::format_double(c.theta_deg) +
                    " d_max=" + text::format_double(c.d_max) +
                    " window=" + text::format_double(c.delta_theta_deg) +
                    " h=" + text::format_double(c.h) + "\n";
  for (const auto& [id, n] : g.nodes()) {
    out += "node " + to_string(id) + " " + std::string(to_string(n.type)) + " " +
           text::format_double(n.position.x) + " " + text::format_double(n.position.y) + " " +
           text::format_double(n.position.z);
    if (n.descriptor) out += " " + descriptor_to_text(*n.descriptor);
    out.push_back('\n');
  }
  for (const auto& [id, n] : g.nodes()) {
    for (const Edge& e : n.adj) {
      if (!(id < e.to)) continue;
      out += "edge " + to_string(id) + " " + to_string(e.to) + " " + text::format_double(e.cost) +
             "\n";
    }
  }
  return out;
}

TopoGraph deserialize(std::string_view text_in) {
  const auto all = text::lines(text_in);
  if (all.empty()) throw graph_error(1, "missing topograph header");
  const auto header = text::split_whitespace(all[0]);
  if (header.empty() || header[0] != "topograph") throw graph_error(1, "expected 'topograph'");
  DescriptorConfig cfg;
  long long next_id = -1;
  for (std::size_t t = 1; t < header.size(); ++t) {
    const auto eq = header[t].find('=');
    if (eq == std::string_view::npos) throw graph_error(1, "malformed header field");
    const auto key = header[t].substr(0, eq);
    const auto val = header[t].substr(eq + 1);
    bool ok = false;
    if (key == "next_id") ok = text::parse_int(val, next_id);
    else if (key == "theta") ok = text::parse_double(val, cfg.theta_deg);
    else if (key == "d_max") ok = text::parse_double(val, cfg.d_max);
    else if (key == "window") ok = text::parse_double(val, cfg.delta_theta_deg);
    else if (key == "h") ok = text::parse_double(val, cfg.h);
    if (!ok) throw graph_error(1, "bad header field '" + std::string(header[t]) + "'");
  }
  if (next_id < 0) throw graph_error(1, "missing next_id");
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw graph_error(1, e.what());
  }

  TopoGraph g(cfg);
  for (std::size_t i = 1; i < all.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto line = text::trim(all[i]);
    if (line.empty()) continue;
    const auto tok = text::split_whitespace(line);
    if (tok[0] == "node") {
      if (tok.size() != 6 && tok.size() != 10) throw graph_error(line_no, "node needs 6 or 10 fields");
      long long id = 0;
      Vec3 p;
      if (!text::parse_int(tok[1], id) || id < 0 || id >= next_id) {
        throw graph_error(line_no, "bad node id");
      }
      if (!text::parse_double(tok[3], p.x) || !text::parse_double(tok[4], p.y) ||
          !text::parse_double(tok[5], p.z)) {
        throw graph_error(line_no, "bad node position");
      }
      const NodeId nid{static_cast<std::uint32_t>(id)};
      if (g.contains(nid)) throw graph_error(line_no, "duplicate node id");
      TopoNode node;
      node.id = nid;
      node.position = p;
      if (tok[2] == "WAYPOINT") {
        if (tok.size() != 10) throw graph_error(line_no, "waypoint without descriptor");
        node.type = NodeType::kWaypoint;
        const std::string desc_text = std::string(tok[6]) + " " + std::string(tok[7]) + " " +
                                      std::string(tok[8]) + " " + std::string(tok[9]);
        try {
          node.descriptor = descriptor_from_text(desc_text, cfg);
        } catch (const FormatError& e) {
          throw graph_error(line_no, e.what());
        }
      } else if (tok[2] == "FRONTIER") {
        if (tok.size() != 6) throw graph_error(line_no, "frontier with descriptor");
        node.type = NodeType::kFrontier;
        g.frontiers_.insert(nid);
      } else {
        throw graph_error(line_no, "unknown node type '" + std::string(tok[2]) + "'");
      }
      g.spatial_.insert(nid, p);
      g.nodes_.emplace(nid, std::move(node));
    } else if (tok[0] == "edge") {
      if (tok.size() != 4) throw graph_error(line_no, "edge needs 4 fields");
      long long a = 0;
      long long b = 0;
      double cost = 0.0;
      if (!text::parse_int(tok[1], a) || !text::parse_int(tok[2], b) ||
          !text::parse_double(tok[3], cost)) {
        throw graph_error(line_no, "bad edge fields");
      }
      const NodeId na{static_cast<std::uint32_t>(a)};
      const NodeId nb{static_cast<std::uint32_t>(b)};
      if (a < 0 || b < 0 || !g.contains(na) || !g.contains(nb) || na == nb) {
        throw graph_error(line_no, "edge references unknown node");
      }
      auto& adj_a = g.mutable_node(na).adj;
      if (find_edge(adj_a, nb) != nullptr) throw graph_error(line_no, "duplicate edge");
      const double expected = edge_cost(g.node(na).position, g.node(nb).position);
      if (std::abs(expected - cost) > 1e-9 * std::max(1.0, expected)) {
        throw graph_error(line_no, "edge cost is not the Euclidean node distance");
      }
      insert_sorted(adj_a, {nb, cost});
      insert_sorted(g.mutable_node(nb).adj, {na, cost});
      ++g.edge_count_;
    } else {
      throw graph_error(line_no, "unknown record '" + std::string(tok[0]) + "'");
    }
  }
  g.next_id_ = static_cast<std::uint32_t>(next_id);
  return g;
}

std::size_t graph_memory_bytes(const TopoGraph& g) {
  std::size_t bytes = GraphMemoryLayout::kHeader;
  for (const auto& [id, n] : g.nodes()) {
    bytes += GraphMemoryLayout::kNodeRecord;
    if (n.descriptor) bytes += descriptor_bytes(n.descriptor->size());
  }
  bytes += g.edge_count() * GraphMemoryLayout::kEdgeRecord;
  return bytes;
}

}  // namespace topoexp
