#pragma once

#include <cmath>
#include <functional>

#include "orlicz/errors.hpp"

namespace orlicz {

// Luxemburg norm from a modular: the unique k with modular(k) = 1, where
// modular(k) is the integral of Phi(u/k) (or the variable-exponent analogue).
// The callable must be nonnegative and nonincreasing in k; this is checked
// while bracketing. A modular that vanishes at k = 1 identifies the zero
// field and yields norm 0.
template <class Modular>
double luxemburg_norm_impl(Modular&& modular, double rel_tol = 1e-10) {
  double k = 1.0;
  double m = modular(k);
  if (!(m >= 0.0) || std::isnan(m))
    throw contract_error("modular evaluation must be nonnegative");
  if (m == 0.0) return 0.0;

  double lo, hi;  // bracket with modular(lo) >= 1 >= modular(hi)
  if (m >= 1.0) {
    lo = k;
    double prev = m;
    do {
      k *= 2.0;
      const double mk = modular(k);
      if (mk > prev * (1.0 + 1e-12) + 1e-14)
        throw contract_error("modular increased with k; not a modular");
      prev = mk;
      if (k > 1e300) throw numeric_error("Luxemburg norm bracket overflow");
    } while (prev > 1.0);
    hi = k;
  } else {
    hi = k;
    double prev = m;
    do {
      k *= 0.5;
      const double mk = modular(k);
      if (mk + 1e-14 < prev * (1.0 - 1e-12))
        throw contract_error("modular decreased as k shrank; not a modular");
      prev = mk;
      if (k < 1e-300) return 0.0;  // modular never reaches 1: zero field
    } while (prev < 1.0);
    lo = k;
  }

  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (modular(mid) >= 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double luxemburg_norm(const std::function<double(double)>& modular_eval,
                             double rel_tol = 1e-10) {
  return luxemburg_norm_impl(modular_eval, rel_tol);
}

}  // namespace orlicz
