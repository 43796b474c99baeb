#pragma once

#include <stdexcept>
#include <string>

namespace qfraud {

// Rejected configuration or command-line input. Raised before any work starts.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Input data that cannot be parsed or violates its schema.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qfraud
