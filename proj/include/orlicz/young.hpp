#pragma once

#include <memory>

#include "orlicz/nonlinearity.hpp"

namespace orlicz {

// Young function Phi(t) = integral of phi over [0, |t|], together with its
// inverse and convex conjugate. Evaluation uses closed forms where the family
// has one (pure powers, piecewise-linear tabulated data) and otherwise a
// cached cumulative quadrature table on a geometric argument grid. Immutable
// and cheap to copy.
class YoungFunction {
 public:
  explicit YoungFunction(NonlinearitySpec spec, double quad_tol = 1e-10);

  double value(double t) const;  // Phi(|t|), even
  double phi(double t) const;
  double phi_inverse(double s) const;

  // Inverse of Phi restricted to [0, inf); s must be >= 0.
  double inverse(double s) const;

  // Convex conjugate Phi*(t) = sup_{s>=0} (s t - Phi(s)), t >= 0. The
  // supremum is attained at s = phi^{-1}(t).
  double conjugate(double t) const;

  const NonlinearitySpec& spec() const;

  // Largest argument the cached table covers; beyond it evaluation falls
  // back to direct quadrature (or throws for tabulated data).
  double table_max() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

inline double eval_Phi(const YoungFunction& yf, double t) {
  return yf.value(t);
}
inline double eval_Phi_conjugate(const YoungFunction& yf, double t) {
  return yf.conjugate(t);
}

}  // namespace orlicz
