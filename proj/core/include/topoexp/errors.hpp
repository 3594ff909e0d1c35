#pragma once

#include <stdexcept>
#include <string>

namespace topoexp {

// Malformed map, graph or descriptor text. The message names the offending line.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition of a graph or planner operation was violated by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Sensor pose inside an occupied cell.
class InvalidPoseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Out-of-range configuration value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A frontier has no finite graph cost from the current node.
class UnreachableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace topoexp
