#pragma once

// Fan-shaped minimum-depth descriptor: n uniform angular sectors around the
// sensor, each holding the smallest planar range of the valid points in it.
// It is the only geometric record a waypoint keeps.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topoexp/geometry.hpp"
#include "topoexp/world.hpp"

namespace topoexp {

struct DescriptorConfig {
  double theta_deg = 5.0;        // sector width
  double d_max = 5.0;            // maximum valid sensing distance
  double h = 1.0;                // height band of valid points
  double delta_theta_deg = 15.0; // visibility query window

  int sectors() const;
  // Odd number of sectors spanned by the query window.
  int window_sectors() const;
  // Throws ConfigError.
  void validate() const;

  friend bool operator==(const DescriptorConfig&, const DescriptorConfig&) = default;
};

class DepthDescriptor {
 public:
  DepthDescriptor(const DescriptorConfig& config, std::vector<double> depths);

  // Every sector at d_max.
  static DepthDescriptor unobserved(const DescriptorConfig& config);

  const DescriptorConfig& config() const { return config_; }
  std::span<const double> depths() const { return depths_; }
  int size() const { return static_cast<int>(depths_.size()); }
  double operator[](int sector) const { return depths_[static_cast<std::size_t>(sector)]; }

  friend bool operator==(const DepthDescriptor&, const DepthDescriptor&) = default;

 private:
  DescriptorConfig config_;
  std::vector<double> depths_;
};

// Keeps points with -h/2 < z < h/2 and |p| < d_max (both strict).
std::vector<Vec3> extract_valid_points(const DepthScan& scan, const DescriptorConfig& config);

// Half-open sector bins [j*theta, (j+1)*theta) over atan2 mapped onto [0, 360).
int sector_of(double heading_rad, const DescriptorConfig& config);

DepthDescriptor build_descriptor(std::span<const Vec3> points, const DescriptorConfig& config);

// Minimum over the odd-width window centred on the sector containing
// `heading_rad`, wrapping across the 0/360 seam.
double window_min(const DepthDescriptor& desc, double heading_rad);

// True iff `target` lies strictly inside the free region observed from
// `origin`: planar range r < d_max and every window depth > r. Shared by
// frontier selection, connectivity update and node correction.
bool covers_point(const DepthDescriptor& desc, const Vec3& origin, const Vec3& target);

// Accounted size of one stored descriptor; depends only on n.
std::size_t descriptor_bytes(int sectors);

// "n theta_deg d_max d1,d2,...,dn"
std::string descriptor_to_text(const DepthDescriptor& desc);
// Inverse of descriptor_to_text. h and the query window come from `window`.
DepthDescriptor descriptor_from_text(std::string_view text, const DescriptorConfig& window);

}  // namespace topoexp
