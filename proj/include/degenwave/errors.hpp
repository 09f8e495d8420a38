#pragma once

#include <stdexcept>
#include <string>

namespace degenwave {

// Invalid user configuration (maps to CLI exit code 1).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A solver gave up: Picard divergence, explicit-scheme blow-up, overflow.
// Maps to CLI exit code 2.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace degenwave
