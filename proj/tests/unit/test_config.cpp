#include <string>

#include "doctest.h"
#include "topoexp/config.hpp"
#include "topoexp/errors.hpp"

using namespace topoexp;

namespace {

std::string error_of(const std::string& text) {
  try {
    validate(parse_config(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("parses sections, comments and faults") {
  const EpisodeConfig c = parse_config(
      "# forest run\n"
      "map.generate = forest\n"
      "map.seed = 7\n"
      "sensor.d_max = 6   # metres\n"
      "descriptor.theta_deg = 10\n"
      "descriptor.delta_theta_deg = 30\n"
      "motion.v_max = 1.5\n"
      "seed = 42\n"
      "fault.1.iteration = 3\n"
      "fault.1.azimuth_lo_deg = 10\n"
      "fault.1.azimuth_hi_deg = 20\n"
      "fault.1.range = 4\n"
      "output.timing = off\n");
  CHECK(c.map_generate == "forest");
  CHECK(c.map_seed == 7);
  CHECK(c.explorer.sensor.d_max == 6.0);
  CHECK(c.explorer.descriptor.d_max == 6.0);
  CHECK(c.explorer.descriptor.theta_deg == 10.0);
  CHECK(c.explorer.motion.v_max == 1.5);
  CHECK(c.explorer.seed == 42);
  CHECK_FALSE(c.explorer.wall_timing);
  REQUIRE(c.explorer.faults.size() == 1);
  CHECK(c.explorer.faults[0].iteration == 3);
  CHECK(c.explorer.faults[0].ray.range == 4.0);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("syntax errors are all reported with line numbers") {
  try {
    parse_config("map.generate = forest\nbogus.key = 1\nno equals sign\nsensor.d_max = five\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2: unknown key 'bogus.key'") != std::string::npos);
    CHECK(msg.find("line 3:") != std::string::npos);
    CHECK(msg.find("line 4: bad value 'five'") != std::string::npos);
  }
}

TEST_CASE("semantic errors are all reported") {
  const std::string msg = error_of("map.generate = nowhere\nsensor.d_max = -1\nmotion.a_max = 0\ndt = 0\n");
  CHECK(msg.find("unknown map.generate kind 'nowhere'") != std::string::npos);
  CHECK(msg.find("d_max") != std::string::npos);
  CHECK(msg.find("motion.a_max") != std::string::npos);
  CHECK(msg.find("dt must be > 0") != std::string::npos);
  CHECK(error_of("seed = 1\n").find("exactly one of map.path and map.generate") != std::string::npos);
  CHECK(error_of("map.path = /no/such/file.map\nstart.x = 1\nstart.y = 1\n").find("map file not found") !=
        std::string::npos);
}

TEST_CASE("canonical text round trips") {
  EpisodeConfig c = parse_config("map.generate = tunnel\nmap.seed = 3\nexecutor.stall_time = 12.5\nstart.x = 1\nstart.y = 2\n");
  c.explorer.faults.push_back({4, {1.0, 2.0, 3.0}});
  const EpisodeConfig back = parse_config(config_to_text(c));
  CHECK(config_to_text(back) == config_to_text(c));
  CHECK(back.explorer.stall_time == 12.5);
  REQUIRE(back.start);
  CHECK(back.start->y == 2.0);
}

TEST_CASE("every listed key is accepted") {
  for (const std::string& key : config_keys()) {
    if (key.starts_with("fault.")) continue;
    CHECK_MESSAGE(std::string(error_of(key + " = x\n")).find("unknown key") == std::string::npos, key);
  }
}

}  // TEST_SUITE
