#pragma once

#include <stdexcept>
#include <string>

namespace netsift {

/// Invalid experiment configuration or operation parameters (CLI exit code 1).
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input data (CLI exit code 2).
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact solver exhausted its node or time budget (CLI exit code 3).
class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netsift
