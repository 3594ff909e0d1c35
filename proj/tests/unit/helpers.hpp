#pragma once

#include <string>
#include <vector>

#include "topoexp/world.hpp"

namespace testutil {

// Rows are given top (highest y) first, '#' occupied.
inline topoexp::WorldMap ascii_map(const std::vector<std::string>& rows, double res = 1.0) {
  std::string text = "mapmeta resolution=" + std::to_string(res) + " origin=0 0 ceiling=3\n";
  for (const auto& r : rows) text += r + "\n";
  return topoexp::load_map(text);
}

inline topoexp::SensorModel noiseless() {
  topoexp::SensorModel s;
  s.noise_sigma = 0.0;
  s.dropout_prob = 0.0;
  return s;
}

}  // namespace testutil
