#pragma once

// Static scene snapshots: occupancy, trajectory, edges and nodes.

#include <span>
#include <string>

#include "topoexp/topo_graph.hpp"
#include "topoexp/world.hpp"

namespace topoexp {

// Vector form. Primitives carry classes occ, traj, edge, waypoint, frontier.
std::string render_svg(const WorldMap& world, const TopoGraph& g, std::span<const Vec3> trajectory);

// Binary P6 pixmap, one pixel per map cell.
std::string render_ppm(const WorldMap& world, const TopoGraph& g, std::span<const Vec3> trajectory);

// Picks the format from the extension (.svg or .ppm). Throws std::runtime_error
// when the file cannot be written.
void render_snapshot(const WorldMap& world, const TopoGraph& g, std::span<const Vec3> trajectory,
                     const std::string& path);

}  // namespace topoexp
