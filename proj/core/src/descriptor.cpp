#include "topoexp/descriptor.hpp"

#include <algorithm>
#include <cmath>

#include "topoexp/errors.hpp"
#include "topoexp/text_util.hpp"

namespace topoexp {

int DescriptorConfig::sectors() const { return static_cast<int>(std::lround(360.0 / theta_deg)); }

int DescriptorConfig::window_sectors() const {
  return static_cast<int>(std::lround(delta_theta_deg / theta_deg));
}

void DescriptorConfig::validate() const {
  if (!(theta_deg > 0.0) || theta_deg > 360.0) {
    throw ConfigError("descriptor.theta_deg must lie in (0, 360]");
  }
  const double n = 360.0 / theta_deg;
  if (std::abs(n - std::round(n)) > 1e-9) {
    throw ConfigError("descriptor.theta_deg must divide 360 exactly");
  }
  if (!(d_max > 0.0)) throw ConfigError("descriptor.d_max must be > 0");
  if (!(h > 0.0)) throw ConfigError("descriptor.h must be > 0");
  if (!(delta_theta_deg >= theta_deg)) {
    throw ConfigError("descriptor.delta_theta_deg must be >= theta_deg");
  }
  if (window_sectors() % 2 == 0) {
    throw ConfigError("descriptor.delta_theta_deg / theta_deg must round to an odd width");
  }
  if (window_sectors() > sectors()) {
    throw ConfigError("descriptor.delta_theta_deg exceeds a full revolution");
  }
}

DepthDescriptor::DepthDescriptor(const DescriptorConfig& config, std::vector<double> depths)
    : config_(config), depths_(std::move(depths)) {
  if (static_cast<int>(depths_.size()) != config_.sectors()) {
    throw FormatError("descriptor length " + std::to_string(depths_.size()) + " != " +
                      std::to_string(config_.sectors()));
  }
  for (double d : depths_) {
    if (!(d > 0.0) || d > config_.d_max) {
      throw FormatError("descriptor depth " + text::format_double(d) + " outside (0, d_max]");
    }
  }
}

DepthDescriptor DepthDescriptor::unobserved(const DescriptorConfig& config) {
  return DepthDescriptor(config, std::vector<double>(static_cast<std::size_t>(config.sectors()),
                                                     config.d_max));
}

std::vector<Vec3> extract_valid_points(const DepthScan& scan, const DescriptorConfig& config) {
  std::vector<Vec3> out;
  out.reserve(scan.points.size());
  const double half_h = config.h / 2.0;
  for (const auto& p : scan.points) {
    if (-half_h < p.z && p.z < half_h && norm(p) < config.d_max) out.push_back(p);
  }
  return out;
}

int sector_of(double heading_rad, const DescriptorConfig& config) {
  const int n = config.sectors();
  const double deg = wrap_degrees(rad_to_deg(heading_rad));
  const int j = static_cast<int>(std::floor(deg / config.theta_deg));
  return std::clamp(j, 0, n - 1);
}

DepthDescriptor build_descriptor(std::span<const Vec3> points, const DescriptorConfig& config) {
  std::vector<double> d(static_cast<std::size_t>(config.sectors()), config.d_max);
  for (const auto& p : points) {
    const double r = planar_norm(p);
    if (!(r > 0.0)) continue;  // no defined bearing
    const int j = sector_of(std::atan2(p.y, p.x), config);
    d[static_cast<std::size_t>(j)] = std::min(d[static_cast<std::size_t>(j)], r);
  }
  return DepthDescriptor(config, std::move(d));
}

double window_min(const DepthDescriptor& desc, double heading_rad) {
  const DescriptorConfig& cfg = desc.config();
  const int n = desc.size();
  const int center = sector_of(heading_rad, cfg);
  const int half = cfg.window_sectors() / 2;
  double m = desc[center];
  for (int k = 1; k <= half; ++k) {
    m = std::min({m, desc[positive_mod(center - k, n)], desc[positive_mod(center + k, n)]});
  }
  return m;
}

bool covers_point(const DepthDescriptor& desc, const Vec3& origin, const Vec3& target) {
  const double r = planar_distance(origin, target);
  if (!(r < desc.config().d_max)) return false;
  return window_min(desc, bearing(origin, target)) > r;
}

std::size_t descriptor_bytes(int sectors) {
  return static_cast<std::size_t>(sectors) * sizeof(double);
}

std::string descriptor_to_text(const DepthDescriptor& desc) {
  const auto& cfg = desc.config();
  std::string out = std::to_string(desc.size()) + " " + text::format_double(cfg.theta_deg) + " " +
                    text::format_double(cfg.d_max) + " ";
  for (int j = 0; j < desc.size(); ++j) {
    if (j) out.push_back(',');
    out += text::format_double(desc[j]);
  }
  return out;
}

DepthDescriptor descriptor_from_text(std::string_view text_in, const DescriptorConfig& window) {
  const auto tokens = text::split_whitespace(text_in);
  if (tokens.size() != 4) throw FormatError("descriptor needs 'n theta d_max depths'");
  long long n = 0;
  DescriptorConfig cfg = window;
  if (!text::parse_int(tokens[0], n) || n <= 0) throw FormatError("bad descriptor sector count");
  if (!text::parse_double(tokens[1], cfg.theta_deg)) throw FormatError("bad descriptor theta");
  if (!text::parse_double(tokens[2], cfg.d_max)) throw FormatError("bad descriptor d_max");
  if (cfg.sectors() != n) throw FormatError("descriptor n inconsistent with theta");
  const auto fields = text::split(tokens[3], ',');
  if (static_cast<long long>(fields.size()) != n) {
    throw FormatError("descriptor has " + std::to_string(fields.size()) + " depths, expected " +
                      std::to_string(n));
  }
  std::vector<double> d(fields.size());
  for (std::size_t j = 0; j < fields.size(); ++j) {
    if (!text::parse_double(fields[j], d[j])) {
      throw FormatError("bad descriptor depth '" + std::string(fields[j]) + "'");
    }
  }
  return DepthDescriptor(cfg, std::move(d));
}

}  // namespace topoexp
