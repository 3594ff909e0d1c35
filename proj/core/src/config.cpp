#include "topoexp/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "topoexp/errors.hpp"
#include "topoexp/map_gen.hpp"
#include "topoexp/text_util.hpp"

namespace topoexp {

namespace {

using Setter = std::function<bool(EpisodeConfig&, std::string_view)>;

Setter real(double ExplorerConfig::*field) {
  return [field](EpisodeConfig& c, std::string_view v) { return text::parse_double(v, c.explorer.*field); };
}

template <class Section>
Setter real_in(Section ExplorerConfig::*section, double Section::*field) {
  return [section, field](EpisodeConfig& c, std::string_view v) {
    return text::parse_double(v, c.explorer.*section.*field);
  };
}

template <class Int>
bool parse_integral(std::string_view v, Int& out) {
  long long x = 0;
  if (!text::parse_int(v, x)) return false;
  if constexpr (std::is_unsigned_v<Int>) {
    if (x < 0) return false;
  }
  out = static_cast<Int>(x);
  return true;
}

bool parse_start_coord(EpisodeConfig& c, std::string_view v, double Vec3::*axis) {
  if (!c.start) c.start = Vec3{};
  return text::parse_double(v, (*c.start).*axis);
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"map.path", [](EpisodeConfig& c, std::string_view v) { c.map_path = v; return !v.empty(); }},
      {"map.generate", [](EpisodeConfig& c, std::string_view v) { c.map_generate = v; return !v.empty(); }},
      {"map.seed", [](EpisodeConfig& c, std::string_view v) { return parse_integral(v, c.map_seed); }},
      {"map.resolution", [](EpisodeConfig& c, std::string_view v) { return text::parse_double(v, c.map_resolution); }},
      {"start.x", [](EpisodeConfig& c, std::string_view v) { return parse_start_coord(c, v, &Vec3::x); }},
      {"start.y", [](EpisodeConfig& c, std::string_view v) { return parse_start_coord(c, v, &Vec3::y); }},
      {"start.z", [](EpisodeConfig& c, std::string_view v) { return parse_start_coord(c, v, &Vec3::z); }},
      {"sensor.d_max", [](EpisodeConfig& c, std::string_view v) {
         const bool ok = text::parse_double(v, c.explorer.sensor.d_max);
         c.explorer.descriptor.d_max = c.explorer.sensor.d_max;
         return ok;
       }},
      {"sensor.h", [](EpisodeConfig& c, std::string_view v) {
         const bool ok = text::parse_double(v, c.explorer.sensor.h);
         c.explorer.descriptor.h = c.explorer.sensor.h;
         return ok;
       }},
      {"sensor.rays_per_rev", [](EpisodeConfig& c, std::string_view v) { return parse_integral(v, c.explorer.sensor.rays_per_rev); }},
      {"sensor.noise_sigma", real_in(&ExplorerConfig::sensor, &SensorModel::noise_sigma)},
      {"sensor.dropout_prob", real_in(&ExplorerConfig::sensor, &SensorModel::dropout_prob)},
      {"sensor.outlier_prob", real_in(&ExplorerConfig::sensor, &SensorModel::outlier_prob)},
      {"sensor.outlier_range", real_in(&ExplorerConfig::sensor, &SensorModel::outlier_range)},
      {"descriptor.theta_deg", real_in(&ExplorerConfig::descriptor, &DescriptorConfig::theta_deg)},
      {"descriptor.delta_theta_deg", real_in(&ExplorerConfig::descriptor, &DescriptorConfig::delta_theta_deg)},
      {"frontier.phi_d_deg", real_in(&ExplorerConfig::frontier, &FrontierConfig::phi_d_deg)},
      {"frontier.tau_d", real_in(&ExplorerConfig::frontier, &FrontierConfig::tau_d)},
      {"frontier.split_deg", real_in(&ExplorerConfig::frontier, &FrontierConfig::split_deg)},
      {"frontier.min_clearance", real_in(&ExplorerConfig::frontier, &FrontierConfig::min_clearance)},
      {"motion.v_max", real_in(&ExplorerConfig::motion, &MotionLimits::v_max)},
      {"motion.a_max", real_in(&ExplorerConfig::motion, &MotionLimits::a_max)},
      {"motion.robot_radius", real_in(&ExplorerConfig::motion, &MotionLimits::robot_radius)},
      {"executor.arrival_tolerance", real_in(&ExplorerConfig::executor, &ExecutorConfig::arrival_tolerance)},
      {"executor.window_half_extent", [](EpisodeConfig& c, std::string_view v) {
         return text::parse_double(v, c.explorer.executor.window.half_extent);
       }},
      {"executor.window_resolution", [](EpisodeConfig& c, std::string_view v) {
         return text::parse_double(v, c.explorer.executor.window.resolution);
       }},
      {"executor.blocked_limit", [](EpisodeConfig& c, std::string_view v) { return parse_integral(v, c.explorer.blocked_limit); }},
      {"executor.stall_time", real(&ExplorerConfig::stall_time)},
      {"executor.replans_per_iteration", [](EpisodeConfig& c, std::string_view v) {
         return parse_integral(v, c.explorer.replans_per_iteration);
       }},
      {"seed", [](EpisodeConfig& c, std::string_view v) { return parse_integral(v, c.explorer.seed); }},
      {"dt", real(&ExplorerConfig::dt)},
      {"max_iterations", [](EpisodeConfig& c, std::string_view v) { return parse_integral(v, c.max_iterations); }},
      {"output.dir", [](EpisodeConfig& c, std::string_view v) { c.output_dir = v; return true; }},
      {"output.snapshot_every", [](EpisodeConfig& c, std::string_view v) { return parse_integral(v, c.snapshot_every); }},
      {"output.snapshot_format", [](EpisodeConfig& c, std::string_view v) {
         c.snapshot_format = v;
         return v == "svg" || v == "ppm";
       }},
      {"output.timing", [](EpisodeConfig& c, std::string_view v) {
         c.explorer.wall_timing = v == "wall";
         return v == "wall" || v == "off";
       }},
  };
  return table;
}

// fault.<k>.<field>
bool set_fault(std::string_view key, std::string_view value, std::string& err,
               std::map<long long, ScriptedFault>& faults) {
  const auto parts = text::split(key, '.');
  long long k = 0;
  if (parts.size() != 3 || !text::parse_int(parts[1], k) || k < 0) {
    err = "malformed fault key '" + std::string(key) + "'";
    return false;
  }
  ScriptedFault& f = faults[k];
  const std::string_view field = parts[2];
  bool ok = false;
  if (field == "iteration") ok = text::parse_int(value, f.iteration);
  else if (field == "azimuth_lo_deg") ok = text::parse_double(value, f.ray.azimuth_lo_deg);
  else if (field == "azimuth_hi_deg") ok = text::parse_double(value, f.ray.azimuth_hi_deg);
  else if (field == "range") ok = text::parse_double(value, f.ray.range);
  else {
    err = "unknown key '" + std::string(key) + "'";
    return false;
  }
  if (!ok) err = "bad value '" + std::string(value) + "' for " + std::string(key);
  return ok;
}

void collect(std::vector<std::string>& errors, const std::function<void()>& check) {
  try {
    check();
  } catch (const ConfigError& e) {
    errors.emplace_back(e.what());
  }
}

std::string join(const std::vector<std::string>& errors) {
  std::string out;
  for (const auto& e : errors) out += (out.empty() ? "" : "\n") + e;
  return out;
}

}  // namespace

EpisodeConfig parse_config(std::string_view source, const std::string& base_dir) {
  EpisodeConfig c;
  std::vector<std::string> errors;
  std::map<long long, ScriptedFault> faults;
  const auto all = text::lines(source);
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::string_view line = all[i];
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(i + 1) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back(where + "expected key = value");
      continue;
    }
    const auto key = text::trim(line.substr(0, eq));
    const auto value = text::trim(line.substr(eq + 1));
    if (key.starts_with("fault.")) {
      std::string err;
      if (!set_fault(key, value, err, faults)) errors.push_back(where + err);
      continue;
    }
    const auto it = setters().find(key);
    if (it == setters().end()) {
      errors.push_back(where + "unknown key '" + std::string(key) + "'");
    } else if (!it->second(c, value)) {
      errors.push_back(where + "bad value '" + std::string(value) + "' for " + std::string(key));
    }
  }
  for (const auto& [k, f] : faults) c.explorer.faults.push_back(f);
  if (!c.map_path.empty() && !base_dir.empty() && std::filesystem::path(c.map_path).is_relative()) {
    c.map_path = (std::filesystem::path(base_dir) / c.map_path).lexically_normal().string();
  }
  if (!errors.empty()) throw ConfigError(join(errors));
  return c;
}

EpisodeConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::filesystem::path(path).parent_path().string());
}

void validate(const EpisodeConfig& c) {
  std::vector<std::string> errors;
  if (c.map_path.empty() == c.map_generate.empty()) {
    errors.emplace_back("exactly one of map.path and map.generate must be set");
  }
  if (!c.map_path.empty() && !std::filesystem::exists(c.map_path)) {
    errors.push_back("map file not found: " + c.map_path);
  }
  if (!c.map_generate.empty()) {
    const auto kinds = fixture_kinds();
    if (std::find(kinds.begin(), kinds.end(), c.map_generate) == kinds.end()) {
      errors.push_back("unknown map.generate kind '" + c.map_generate + "'");
    }
  }
  if (!c.map_path.empty() && !c.start) errors.emplace_back("start.x/start.y required with map.path");
  if (!(c.map_resolution > 0.0)) errors.emplace_back("map.resolution must be > 0");
  if (c.max_iterations < 0) errors.emplace_back("max_iterations must be >= 0");
  if (c.snapshot_every < 0) errors.emplace_back("output.snapshot_every must be >= 0");

  const ExplorerConfig& e = c.explorer;
  collect(errors, [&] { e.descriptor.validate(); });
  collect(errors, [&] { e.frontier.validate(e.descriptor); });
  collect(errors, [&] { e.sensor.validate(e.descriptor.sectors()); });
  collect(errors, [&] { e.motion.validate(); });
  collect(errors, [&] { e.executor.validate(); });
  if (!(e.dt > 0.0)) errors.emplace_back("dt must be > 0");
  if (e.blocked_limit < 1) errors.emplace_back("executor.blocked_limit must be >= 1");
  if (!(e.stall_time > 0.0)) errors.emplace_back("executor.stall_time must be > 0");
  if (e.replans_per_iteration < 1) errors.emplace_back("executor.replans_per_iteration must be >= 1");
  for (std::size_t k = 0; k < e.faults.size(); ++k) {
    const ScriptedFault& f = e.faults[k];
    const std::string tag = "fault #" + std::to_string(k) + ": ";
    if (f.iteration < 0) errors.push_back(tag + "iteration must be >= 0");
    if (!(f.ray.azimuth_lo_deg < f.ray.azimuth_hi_deg)) errors.push_back(tag + "azimuth_lo_deg must be < azimuth_hi_deg");
    if (!(f.ray.range > 0.0)) errors.push_back(tag + "range must be > 0");
  }
  if (!errors.empty()) throw ConfigError(join(errors));
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, s] : setters()) keys.push_back(k);
  for (const char* f : {"iteration", "azimuth_lo_deg", "azimuth_hi_deg", "range"}) {
    keys.push_back(std::string("fault.<k>.") + f);
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::string config_to_text(const EpisodeConfig& c) {
  using text::format_double;
  const ExplorerConfig& e = c.explorer;
  std::ostringstream out;
  if (!c.map_path.empty()) out << "map.path = " << c.map_path << "\n";
  if (!c.map_generate.empty()) out << "map.generate = " << c.map_generate << "\n";
  out << "map.seed = " << c.map_seed << "\n"
      << "map.resolution = " << format_double(c.map_resolution) << "\n";
  if (c.start) {
    out << "start.x = " << format_double(c.start->x) << "\n"
        << "start.y = " << format_double(c.start->y) << "\n"
        << "start.z = " << format_double(c.start->z) << "\n";
  }
  out << "sensor.d_max = " << format_double(e.sensor.d_max) << "\n"
      << "sensor.h = " << format_double(e.sensor.h) << "\n"
      << "sensor.rays_per_rev = " << e.sensor.rays_per_rev << "\n"
      << "sensor.noise_sigma = " << format_double(e.sensor.noise_sigma) << "\n"
      << "sensor.dropout_prob = " << format_double(e.sensor.dropout_prob) << "\n"
      << "sensor.outlier_prob = " << format_double(e.sensor.outlier_prob) << "\n"
      << "sensor.outlier_range = " << format_double(e.sensor.outlier_range) << "\n"
      << "descriptor.theta_deg = " << format_double(e.descriptor.theta_deg) << "\n"
      << "descriptor.delta_theta_deg = " << format_double(e.descriptor.delta_theta_deg) << "\n"
      << "frontier.phi_d_deg = " << format_double(e.frontier.phi_d_deg) << "\n"
      << "frontier.tau_d = " << format_double(e.frontier.tau_d) << "\n"
      << "frontier.split_deg = " << format_double(e.frontier.split_deg) << "\n"
      << "frontier.min_clearance = " << format_double(e.frontier.min_clearance) << "\n"
      << "motion.v_max = " << format_double(e.motion.v_max) << "\n"
      << "motion.a_max = " << format_double(e.motion.a_max) << "\n"
      << "motion.robot_radius = " << format_double(e.motion.robot_radius) << "\n"
      << "executor.arrival_tolerance = " << format_double(e.executor.arrival_tolerance) << "\n"
      << "executor.window_half_extent = " << format_double(e.executor.window.half_extent) << "\n"
      << "executor.window_resolution = " << format_double(e.executor.window.resolution) << "\n"
      << "executor.blocked_limit = " << e.blocked_limit << "\n"
      << "executor.stall_time = " << format_double(e.stall_time) << "\n"
      << "executor.replans_per_iteration = " << e.replans_per_iteration << "\n"
      << "seed = " << e.seed << "\n"
      << "dt = " << format_double(e.dt) << "\n"
      << "max_iterations = " << c.max_iterations << "\n";
  for (std::size_t k = 0; k < e.faults.size(); ++k) {
    const ScriptedFault& f = e.faults[k];
    out << "fault." << k << ".iteration = " << f.iteration << "\n"
        << "fault." << k << ".azimuth_lo_deg = " << format_double(f.ray.azimuth_lo_deg) << "\n"
        << "fault." << k << ".azimuth_hi_deg = " << format_double(f.ray.azimuth_hi_deg) << "\n"
        << "fault." << k << ".range = " << format_double(f.ray.range) << "\n";
  }
  if (!c.output_dir.empty()) out << "output.dir = " << c.output_dir << "\n";
  out << "output.snapshot_every = " << c.snapshot_every << "\n"
      << "output.snapshot_format = " << c.snapshot_format << "\n"
      << "output.timing = " << (e.wall_timing ? "wall" : "off") << "\n";
  return out.str();
}

}  // namespace topoexp
