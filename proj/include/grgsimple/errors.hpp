#pragma once

#include <stdexcept>
#include <string>

namespace grgsimple {

// Invalid argument or precondition violated by the caller.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Operation is well-formed but not defined for this configuration
// (e.g. torus-only seed placement requested on a square domain).
class UnsupportedConfiguration : public std::logic_error {
 public:
  explicit UnsupportedConfiguration(const std::string& what) : std::logic_error(what) {}
};

// Graph is disconnected where a connected graph is required.
class ConnectivityError : public std::runtime_error {
 public:
  explicit ConnectivityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace grgsimple
