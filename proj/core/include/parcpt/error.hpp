#pragma once

#include <stdexcept>
#include <string>

namespace parcpt {

// Malformed data or arguments: bad series, out-of-range segment, mismatched inputs.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// A detector, split, or scenario configuration that cannot be run.
class InvalidConfig : public std::invalid_argument {
 public:
  explicit InvalidConfig(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace parcpt
