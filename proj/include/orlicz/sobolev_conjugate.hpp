#pragma once

#include <memory>
#include <vector>

#include "orlicz/young.hpp"

namespace orlicz {

// Trend verdict for an improper-integral probe. Trends that do not separate
// cleanly are reported as inconclusive rather than guessed.
enum class Trend { Convergent, Divergent, Inconclusive };

// Audit of the two integrability requirements on
//   t  |->  Phi^{-1}(t) / t^{(N+1)/N}
// near zero (must be finite) and at infinity (must diverge). Decided from
// the per-decade increments of the integral.
struct SobolevAuditReport {
  bool near_zero_finite = false;
  bool at_infinity_divergent = false;
  Trend near_zero = Trend::Inconclusive;
  Trend at_infinity = Trend::Inconclusive;
  std::vector<double> near_zero_increments;   // decade integrals, shrinking t
  std::vector<double> at_infinity_increments; // decade integrals, growing t
};

SobolevAuditReport sobolev_conjugate_audit(const YoungFunction& yf, int N);

// The conjugate growth function Phi_star, built by tabulating its inverse
//   Phi_star^{-1}(t) = integral_0^t Phi^{-1}(s) / s^{(N+1)/N} ds
// on a geometric grid and inverting monotonically.
class SobolevConjugate {
 public:
  SobolevConjugate(const YoungFunction& yf, int N);

  double inverse(double t) const;  // Phi_star^{-1}
  double value(double x) const;    // Phi_star, throws numeric_error beyond reach
  double max_reach() const;        // largest x value() can resolve

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Probes whether |t|^{q_plus} / Phi_star(k t) decays for every k in k_list,
// judged on the three largest probe decades the cached conjugate resolves.
bool condition_decay_probe(const YoungFunction& yf, double q_plus,
                           const std::vector<double>& k_list, int N);

}  // namespace orlicz
