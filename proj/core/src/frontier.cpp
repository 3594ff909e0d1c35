#include "topoexp/frontier.hpp"

#include <algorithm>
#include <cmath>

#include "topoexp/errors.hpp"

namespace topoexp {

namespace {

// Splits the circular span [left, left + extent] into `pieces` near-equal parts.
void append_split(std::vector<Interval>& out, int left, int extent, int pieces, int n) {
  int prev = 0;
  for (int i = 1; i <= pieces; ++i) {
    const int next = static_cast<int>(std::lround(static_cast<double>(i) * extent / pieces));
    out.push_back({positive_mod(left + prev, n), positive_mod(left + next, n),
                   IntervalKind::kMissingDepth});
    prev = next;
  }
}

int pieces_for(int extent_sectors, double theta_deg, double split_deg) {
  const double extent_deg = extent_sectors * theta_deg;
  if (extent_deg <= split_deg) return 1;
  return static_cast<int>(std::ceil(extent_deg / split_deg - 1e-9));
}

void sort_intervals(std::vector<Interval>& v) {
  std::stable_sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) {
    if (a.left != b.left) return a.left < b.left;
    if (a.kind != b.kind) return a.kind == IntervalKind::kMissingDepth;
    return a.right < b.right;
  });
}

}  // namespace

void FrontierConfig::validate(const DescriptorConfig& descriptor) const {
  if (!(phi_d_deg >= descriptor.theta_deg)) {
    throw ConfigError("frontier.phi_d_deg must be >= descriptor.theta_deg");
  }
  if (!(tau_d > 0.0)) throw ConfigError("frontier.tau_d must be > 0");
  if (!(split_deg >= phi_d_deg)) throw ConfigError("frontier.split_deg must be >= phi_d_deg");
  if (!(min_clearance >= 0.0)) throw ConfigError("frontier.min_clearance must be >= 0");
}

std::string_view to_string(IntervalKind kind) {
  return kind == IntervalKind::kMissingDepth ? "missing" : "discontinuity";
}

std::vector<Interval> find_intervals(const DepthDescriptor& desc, const FrontierConfig& cfg) {
  const DescriptorConfig& dc = desc.config();
  const int n = desc.size();
  const double d_max = dc.d_max;
  std::vector<Interval> out;

  int anchor = -1;
  for (int j = 0; j < n; ++j) {
    if (desc[j] != d_max) {
      anchor = j;
      break;
    }
  }
  if (anchor < 0) {
    // No boundary exists anywhere: the whole circle is one open interval.
    append_split(out, 0, n, pieces_for(n, dc.theta_deg, cfg.split_deg), n);
    sort_intervals(out);
    return out;
  }

  // Walk once around the circle starting just after a non-max sector.
  int run_start = -1;
  for (int step = 1; step <= n; ++step) {
    const int j = (anchor + step) % n;
    const bool open = desc[j] == d_max;
    if (open && run_start < 0) run_start = step;
    if (!open && run_start >= 0) {
      const int run_len = step - run_start;
      if (run_len * dc.theta_deg >= cfg.phi_d_deg - 1e-9) {
        out.push_back({positive_mod(anchor + run_start - 1, n), j, IntervalKind::kMissingDepth});
      }
      run_start = -1;
    }
  }

  for (int j = 0; j < n; ++j) {
    const int k = (j + 1) % n;
    if (std::abs(desc[j] - desc[k]) > cfg.tau_d) {
      out.push_back({j, k, IntervalKind::kDiscontinuity});
    }
  }
  sort_intervals(out);
  return out;
}

std::vector<Interval> split_large(std::span<const Interval> intervals,
                                  const DescriptorConfig& descriptor, const FrontierConfig& cfg) {
  const int n = descriptor.sectors();
  std::vector<Interval> out;
  out.reserve(intervals.size());
  for (const auto& iv : intervals) {
    if (iv.kind != IntervalKind::kMissingDepth) {
      out.push_back(iv);
      continue;
    }
    const int extent = iv.extent_sectors(n);
    append_split(out, iv.left, extent, pieces_for(extent, descriptor.theta_deg, cfg.split_deg), n);
  }
  return out;
}

std::vector<Interval> filter_by_last_heading(std::span<const Interval> intervals,
                                             double last_waypoint_heading,
                                             const DescriptorConfig& descriptor) {
  const int n = descriptor.sectors();
  const int s = sector_of(last_waypoint_heading, descriptor);
  std::vector<Interval> out;
  for (const auto& iv : intervals) {
    const bool contains = positive_mod(s - iv.left, n) <= iv.extent_sectors(n);
    if (!contains) out.push_back(iv);
  }
  return out;
}

std::vector<Candidate> candidate_positions(const DepthDescriptor& desc,
                                           std::span<const Interval> intervals,
                                           const Vec3& node_position, const FrontierConfig& cfg) {
  const double theta = desc.config().theta_deg;
  std::vector<Candidate> out;
  for (const auto& iv : intervals) {
    const double a_left = deg_to_rad(iv.left * theta);
    const double a_right = deg_to_rad(iv.right * theta);
    const double d_left = desc[iv.left];
    const double d_right = desc[iv.right];
    const double x = (d_left * std::cos(a_left) + d_right * std::cos(a_right)) / 2.0;
    const double y = (d_left * std::sin(a_left) + d_right * std::sin(a_right)) / 2.0;
    if (std::sqrt(x * x + y * y) < cfg.min_clearance) continue;
    out.push_back({{node_position.x + x, node_position.y + y, node_position.z}, iv.kind});
  }
  return out;
}

}  // namespace topoexp
