#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "orlicz/errors.hpp"

namespace orlicz {

// Parametric families for the coefficient nonlinearity phi(t) = a(|t|) t,
// an odd increasing homeomorphism of the real line.

struct PurePower {  // phi(t) = |t|^{p-2} t, p > 1
  double p;
};

struct PowerLog {  // phi(t) = log(1+|t|^r) |t|^{p-2} t, p > 1, r > 0
  double p;
  double r;
};

struct PowerOverLog {  // phi(t) = |t|^{p-2} t / log(1+|t|), p > 2
  double p;
};

struct Tabulated {  // user-supplied knots (t, phi(t)); must start at (0,0)
  std::vector<std::pair<double, double>> knots;
};

class NonlinearitySpec {
 public:
  using Family = std::variant<PurePower, PowerLog, PowerOverLog, Tabulated>;

  static NonlinearitySpec pure_power(double p);
  static NonlinearitySpec power_log(double p, double r);
  static NonlinearitySpec power_over_log(double p);
  static NonlinearitySpec tabulated(std::vector<std::pair<double, double>> knots);

  double phi(double t) const;          // odd in t; throws extrapolation_error
                                       // outside tabulated knot range
  double phi_inverse(double s) const;  // odd inverse, monotone bracketing

  // Largest |t| phi is defined at (finite only for Tabulated).
  double domain_max() const;

  bool is_tabulated() const;
  bool is_pure_power() const;

  // t->0 and t->infinity limits of t phi(t)/Phi(t) where the family has a
  // closed form for them; nullopt for Tabulated.
  std::optional<std::pair<double, double>> index_limits() const;

  std::string describe() const;
  const Family& family() const { return family_; }

 private:
  explicit NonlinearitySpec(Family f);
  Family family_;
};

// Convenience free function matching the mathematical notation.
inline double eval_phi(const NonlinearitySpec& spec, double t) {
  return spec.phi(t);
}

}  // namespace orlicz
