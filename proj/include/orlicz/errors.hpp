#pragma once

#include <stdexcept>
#include <string>

namespace orlicz {

// Query outside the range a tabulated nonlinearity was given on.
struct extrapolation_error : std::domain_error {
  using std::domain_error::domain_error;
};

// A callable handed to a norm/modular routine broke its monotonicity contract.
struct contract_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Requested geometry does not fit in the domain.
struct geometry_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Mesh too coarse for the requested construction; carries the largest count
// that would still fit.
struct capacity_error : std::runtime_error {
  capacity_error(const std::string& what, int max_feasible)
      : std::runtime_error(what), max_feasible_k(max_feasible) {}
  int max_feasible_k;
};

// Operation called outside the growth regime it is valid in.
struct regime_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numeric construction (inversion, cumulative integral, ...) left its
// representable range.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent problem configuration; what() names the field.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace orlicz
