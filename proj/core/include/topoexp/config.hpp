#pragma once

// Episode configuration: flat `key = value` lines with dotted section
// prefixes, `#` comments. See fixtures/configs for examples.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "topoexp/explorer.hpp"

namespace topoexp {

struct EpisodeConfig {
  std::string map_path;      // map file, relative paths resolved against the config file
  std::string map_generate;  // or a fixture kind generated in memory
  std::uint64_t map_seed = 1;
  double map_resolution = 0.1;
  std::optional<Vec3> start;  // defaults to the fixture start

  ExplorerConfig explorer;
  long long max_iterations = 0;  // 0: 50 x free area / d_max^2

  std::string output_dir;
  int snapshot_every = 25;  // 0 disables periodic snapshots; the final one is always written
  std::string snapshot_format = "svg";
};

// Throws ConfigError listing every problem found, one per line.
EpisodeConfig parse_config(std::string_view text, const std::string& base_dir = "");
EpisodeConfig load_config_file(const std::string& path);

// Semantic checks across all sections; throws ConfigError listing all of them.
void validate(const EpisodeConfig& config);

// Every accepted key, sorted.
std::vector<std::string> config_keys();

// Canonical text form; parse_config(config_to_text(c)) reproduces c.
std::string config_to_text(const EpisodeConfig& config);

}  // namespace topoexp
