#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "orlicz/energy.hpp"
#include "orlicz/nonlinearity.hpp"
#include "orlicz/solver.hpp"

namespace orlicz {

// Full experiment description, read from JSON:
// {
//   "domain":       { "extents": [1.0], "cells": [256] },
//   "nonlinearity": { "family": "power_log", "p": 2.5, "r": 1.5 },
//   "exponent":     "1.5 + 0.4*x",            // or a plain number
//   "solver":       { "grad_tol": 1e-8, ... },  // optional overrides
//   "audit":        { "dimension": 6, "decay_scales": [1,2,3] },
//   "seed":         0
// }
// Families: "pure_power" (p), "power_log" (p, r), "power_over_log" (p),
// "tabulated" (knots: [[t, phi], ...]).
struct ProblemConfig {
  std::vector<double> extents;  // one entry per axis (1 or 2)
  std::vector<long> cells;
  NonlinearitySpec nonlinearity = NonlinearitySpec::pure_power(2.0);
  std::string exponent_text = "2";  // always an expression; numbers normalized
  SolverOptions solver;
  double ball_radius = 0.0;  // 0 = derive from the measured embedding constant
  int audit_dimension = 6;
  std::vector<double> decay_scales = {1.0, 2.0, 3.0};
  std::uint64_t seed = 0;
};

// Throws config_error naming the offending field.
ProblemConfig parse_config(const nlohmann::json& j);
ProblemConfig load_config(const std::string& path);

// Builds grid + exponent field + Young function. Throws config_error when the
// exponent expression mentions y on a 1-D domain.
EnergyContext make_context(const ProblemConfig& cfg);

// Canonical (key-ordered, normalized) form used for hashing and echoing.
nlohmann::ordered_json canonical_json(const ProblemConfig& cfg);

// FNV-1a over the canonical dump; stable across runs and platforms.
std::uint64_t config_hash(const ProblemConfig& cfg);
std::string hash_hex(std::uint64_t h);

}  // namespace orlicz
