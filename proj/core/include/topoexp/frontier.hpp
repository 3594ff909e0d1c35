#pragma once

// Traversable angular intervals of a descriptor and the candidate frontier
// positions derived from their boundary sectors.

#include <span>
#include <string_view>
#include <vector>

#include "topoexp/descriptor.hpp"
#include "topoexp/geometry.hpp"

namespace topoexp {

struct FrontierConfig {
  double phi_d_deg = 20.0;    // minimum extent of a missing-depth run
  double tau_d = 1.5;         // depth discontinuity threshold, metres
  double split_deg = 60.0;    // larger missing-depth intervals are split evenly
  double min_clearance = 0.5; // candidates closer than this to the origin are dropped

  void validate(const DescriptorConfig& descriptor) const;
};

enum class IntervalKind { kMissingDepth, kDiscontinuity };

std::string_view to_string(IntervalKind kind);

// Boundary sector indices, circularly ordered from left to right.
struct Interval {
  int left = 0;
  int right = 0;
  IntervalKind kind = IntervalKind::kMissingDepth;

  // Circular span in sectors from left to right.
  int extent_sectors(int n) const { return positive_mod(right - left, n); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Candidate {
  Vec3 position;
  IntervalKind kind = IntervalKind::kMissingDepth;
};

// Missing-depth runs (with flanking boundary sectors) and adjacent-sector
// depth jumps, ordered by left index. A descriptor that is d_max everywhere
// yields the full circle already split into split_deg pieces.
std::vector<Interval> find_intervals(const DepthDescriptor& desc, const FrontierConfig& cfg);

std::vector<Interval> split_large(std::span<const Interval> intervals,
                                  const DescriptorConfig& descriptor, const FrontierConfig& cfg);

// Drops every interval whose inclusive span contains the sector of the
// heading towards the previous waypoint.
std::vector<Interval> filter_by_last_heading(std::span<const Interval> intervals,
                                             double last_waypoint_heading,
                                             const DescriptorConfig& descriptor);

// Midpoint of the two boundary points of each interval, in world coordinates
// (node x, y added; z taken from the node).
std::vector<Candidate> candidate_positions(const DepthDescriptor& desc,
                                           std::span<const Interval> intervals,
                                           const Vec3& node_position, const FrontierConfig& cfg);

}  // namespace topoexp
