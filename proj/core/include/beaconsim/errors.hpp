#pragma once

#include <stdexcept>
#include <string>

namespace beaconsim {

/// Channel analysis needs at least one neighbor heard this epoch.
class NoNeighborsError : public std::runtime_error {
 public:
  NoNeighborsError() : std::runtime_error("no neighbors available for analysis") {}
};

class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace beaconsim
