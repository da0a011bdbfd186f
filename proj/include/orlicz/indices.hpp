#pragma once

#include <string>

#include "orlicz/young.hpp"

namespace orlicz {

// Growth indices of a Young function:
//   p0     = inf_{t>0} t phi(t) / Phi(t)
//   p0_sup = sup_{t>0} t phi(t) / Phi(t)
// estimated on a geometric sample grid and sharpened with the closed-form
// endpoint limits where the family provides them.
struct GrowthIndices {
  double p0 = 0.0;
  double p0_sup = 0.0;
  std::string grid_used;
};

GrowthIndices estimate_indices(const YoungFunction& yf, double t_min = 1e-6,
                               double t_max = 1e6, int n_samples = 2000);

// Doubling-condition report: the ratio t phi / Phi sampled on a tail grid.
// pass means the tail ratio stays in (1, finite), which certifies the
// doubling property for both Phi and its conjugate.
struct Delta2Report {
  double liminf_est = 0.0;
  double limsup_est = 0.0;
  bool pass = false;
};

Delta2Report check_delta2(const YoungFunction& yf);

}  // namespace orlicz
