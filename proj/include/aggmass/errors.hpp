// errors.hpp: exception types shared by the library and mapped to CLI exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace aggmass {

// Bad or inconsistent configuration input (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric or domain failure: precondition violations, out-of-range queries,
// diverging estimates (CLI exit code 3).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failure while reading or writing data (CLI exit code 4).
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aggmass
