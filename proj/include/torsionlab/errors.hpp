#pragma once

#include <stdexcept>
#include <string>

namespace torsionlab {

/// Invalid arguments: out-of-range parameters, malformed input files.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size or enumeration budget would be exceeded.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace torsionlab
