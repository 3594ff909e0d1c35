// explore: run, batch, render and gen-map front end.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "topoexp/config.hpp"
#include "topoexp/episode.hpp"
#include "topoexp/errors.hpp"
#include "topoexp/map_gen.hpp"
#include "topoexp/render.hpp"
#include "topoexp/text_util.hpp"

namespace {

constexpr int kExitComplete = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitBudget = 2;
constexpr int kExitConfig = 3;
constexpr int kExitContract = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw topoexp::ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<topoexp::Vec3> read_trajectory(const std::string& path) {
  using namespace topoexp;
  const std::string data = read_file(path);
  std::vector<Vec3> out;
  const auto rows = text::lines(data);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (text::trim(rows[i]).empty()) continue;
    const auto f = text::split(rows[i], ',');
    Vec3 p;
    if (f.size() < 4 || !text::parse_double(f[1], p.x) || !text::parse_double(f[2], p.y) ||
        !text::parse_double(f[3], p.z)) {
      throw FormatError("trajectory line " + std::to_string(i + 1) + ": expected t,x,y,z,...");
    }
    out.push_back(p);
  }
  return out;
}

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<long long> max_iterations;
  std::string timing;
};

void apply_overrides(topoexp::EpisodeConfig& cfg, const RunOptions& o) {
  if (o.seed) cfg.explorer.seed = *o.seed;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.max_iterations) cfg.max_iterations = *o.max_iterations;
  if (!o.timing.empty()) cfg.explorer.wall_timing = o.timing == "wall";
}

int cmd_run(const RunOptions& o) {
  auto cfg = topoexp::load_config_file(o.config);
  apply_overrides(cfg, o);
  const auto log = topoexp::run_episode(cfg);
  std::cout << topoexp::summary_line(log.summary) << "\n";
  return log.summary.terminated ? kExitComplete : kExitBudget;
}

int cmd_batch(const std::vector<std::string>& configs, const std::vector<std::uint64_t>& seeds,
              const RunOptions& o, int jobs, double curve_step) {
  std::vector<topoexp::EpisodeConfig> all;
  for (const auto& path : configs) {
    auto base = topoexp::load_config_file(path);
    apply_overrides(base, o);
    topoexp::validate(base);
    if (seeds.empty()) {
      all.push_back(base);
    } else {
      for (std::uint64_t s : seeds) {
        auto c = base;
        c.explorer.seed = s;
        all.push_back(c);
      }
    }
  }
  const auto report = topoexp::run_batch(all, jobs);
  const std::string summary = topoexp::batch_summary_csv(report);
  std::cout << summary;
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    std::ofstream(std::filesystem::path(o.out) / "batch_summary.csv") << summary;
    std::ofstream(std::filesystem::path(o.out) / "coverage_curves.csv")
        << topoexp::coverage_curves_csv(report, curve_step);
    std::ofstream(std::filesystem::path(o.out) / "timing_table.csv")
        << topoexp::timing_table_csv(report);
  }
  int code = kExitComplete;
  for (const auto& e : report.entries) {
    if (!e.summary) {
      std::cerr << "episode " << e.label << " seed " << e.seed << " failed: " << e.error << "\n";
      code = kExitContract;
    } else if (!e.summary->terminated && code == kExitComplete) {
      code = kExitBudget;
    }
  }
  return code;
}

int cmd_render(const std::string& graph, const std::string& map, const std::string& out,
               const std::string& trajectory) {
  const auto world = topoexp::load_map(read_file(map));
  const auto g = topoexp::deserialize(read_file(graph));
  std::vector<topoexp::Vec3> traj;
  if (!trajectory.empty()) traj = read_trajectory(trajectory);
  topoexp::render_snapshot(world, g, traj, out);
  return kExitComplete;
}

int cmd_gen_map(const std::string& kind, std::uint64_t seed, double resolution, const std::string& out) {
  const auto fixture = topoexp::make_fixture(kind, seed, resolution);
  std::ofstream file(out);
  if (!file) throw std::runtime_error("cannot write " + out);
  file << topoexp::save_map(fixture.world);
  std::cout << "start " << topoexp::text::format_double(fixture.start.x) << " "
            << topoexp::text::format_double(fixture.start.y) << " "
            << topoexp::text::format_double(fixture.start.z) << "\n";
  return kExitComplete;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Descriptor-driven topological exploration simulator"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run one exploration episode");
  run->add_option("--config", run_opts.config, "Episode config file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", run_opts.seed, "Override the episode seed");
  run->add_option("--out", run_opts.out, "Output directory for artifacts");
  run->add_option("--max-iterations", run_opts.max_iterations, "Override the iteration budget");
  run->add_option("--timing", run_opts.timing, "wall or off")->check(CLI::IsMember({"wall", "off"}));

  RunOptions batch_opts;
  std::vector<std::string> batch_configs;
  std::vector<std::uint64_t> seeds;
  int jobs = 1;
  double curve_step = 1.0;
  auto* batch = app.add_subcommand("batch", "Run configs x seeds and aggregate");
  batch->add_option("--config", batch_configs, "Episode config file (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  batch->add_option("--seeds", seeds, "Comma-separated seeds")->delimiter(',');
  batch->add_option("--jobs", jobs, "Parallel episodes")->check(CLI::PositiveNumber);
  batch->add_option("--out", batch_opts.out, "Output directory");
  batch->add_option("--max-iterations", batch_opts.max_iterations, "Override the iteration budget");
  batch->add_option("--timing", batch_opts.timing, "wall or off")->check(CLI::IsMember({"wall", "off"}));
  batch->add_option("--curve-step", curve_step, "Coverage curve sampling step in seconds")
      ->check(CLI::PositiveNumber);

  std::string graph_path;
  std::string map_path;
  std::string image_path;
  std::string traj_path;
  auto* render = app.add_subcommand("render", "Render a graph over a map");
  render->add_option("--graph", graph_path, "Graph file")->required()->check(CLI::ExistingFile);
  render->add_option("--map", map_path, "Map file")->required()->check(CLI::ExistingFile);
  render->add_option("--out", image_path, "Output .svg or .ppm")->required();
  render->add_option("--trajectory", traj_path, "trajectory.csv")->check(CLI::ExistingFile);

  std::string kind;
  std::uint64_t map_seed = 1;
  double resolution = 0.1;
  std::string map_out;
  auto* gen = app.add_subcommand("gen-map", "Write a generated fixture map");
  gen->add_option("--kind", kind, "Fixture kind")
      ->required()
      ->check(CLI::IsMember(topoexp::fixture_kinds()));
  gen->add_option("--seed", map_seed, "Generator seed");
  gen->add_option("--resolution", resolution, "Metres per cell")->check(CLI::PositiveNumber);
  gen->add_option("--out", map_out, "Output map file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*batch) return cmd_batch(batch_configs, seeds, batch_opts, jobs, curve_step);
    if (*render) return cmd_render(graph_path, map_path, image_path, traj_path);
    if (*gen) return cmd_gen_map(kind, map_seed, resolution, map_out);
  } catch (const topoexp::ConfigError& e) {
    std::cerr << "config error:\n" << e.what() << "\n";
    return kExitConfig;
  } catch (const topoexp::FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const topoexp::InvalidPoseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const topoexp::ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return kExitContract;
  } catch (const topoexp::UnreachableError& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return kExitContract;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
