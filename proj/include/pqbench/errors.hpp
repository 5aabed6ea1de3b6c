#pragma once

#include <stdexcept>
#include <string>

namespace pqbench {

// Scenario or catalog content that fails validation. CLI maps this to exit 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem and format trouble while reading or writing. CLI maps this to exit 2.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pqbench
