#pragma once
// Reference values and helpers for the test suites, kept independent of the
// library internals they are used to check: a locally implemented composite
// Gauss quadrature, closed-form antiderivatives and conjugates for the
// built-in families, the exact principal eigenvalue of the discrete
// Dirichlet stencil pair, and deterministic field builders.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "orlicz/fields.hpp"
#include "orlicz/grid.hpp"

namespace oracle {

// Composite 5-point Gauss-Legendre rule with fixed panels. Standard nodes
// and weights, written out rather than generated so this path shares nothing
// with the library's quadrature.
template <class F>
double integrate(F&& f, double a, double b, int panels = 512) {
  static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double ws[5] = {0.2369268850561891, 0.4786286704993665,
                               0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += ws[i] * f(c + 0.5 * h * xs[i]);
    total += 0.5 * h * s;
  }
  return total;
}

inline double rel_err(double got, double want) {
  const double scale = std::max({std::abs(got), std::abs(want), 1e-300});
  return std::abs(got - want) / scale;
}

// --- closed forms -----------------------------------------------------------

// integral of |s|^{p-1} over [0, t]
inline double Phi_pure_power(double p, double t) {
  return std::pow(std::abs(t), p) / p;
}

// Legendre transform of t^p/p is s^{p'}/p' with 1/p + 1/p' = 1.
inline double conjugate_pure_power(double p, double s) {
  const double pc = p / (p - 1.0);
  return std::pow(s, pc) / pc;
}

// integral of log(1+s) s over [0, t], by parts:
//   ((t^2 - 1) log(1 + t)) / 2 - t^2/4 + t/2
inline double Phi_power_log_2_1(double t) {
  t = std::abs(t);
  return 0.5 * (t * t - 1.0) * std::log1p(t) - 0.25 * t * t + 0.5 * t;
}

// integral of log(1+s^2) s over [0, t]:
//   ((1 + t^2) log(1 + t^2) - t^2) / 2
inline double Phi_power_log_2_2(double t) {
  const double w = t * t;
  return 0.5 * ((1.0 + w) * std::log1p(w) - w);
}

// Growth conjugate of t^2/2 in dimension 3. The defining inverse is
//   integral_0^t sqrt(2 s) / s^{4/3} ds = 6 sqrt(2) t^{1/6},
// so the conjugate itself is (x / (6 sqrt 2))^6.
inline double sobolev_conjugate_pp2_3d(double x) {
  const double c = 6.0 * std::sqrt(2.0);
  return std::pow(x / c, 6.0);
}

// Principal eigenvalue of the forward-difference stiffness against the
// corner-averaged mass on a Dirichlet interval of given length: the sine
// mode sin(pi x / L) is an exact discrete eigenvector of both stencils and
// the ratio collapses to (4/h^2) tan^2(pi h / (2 L)).
inline double discrete_principal_eigenvalue(double length, int cells) {
  const double h = length / cells;
  const double t = std::tan(0.5 * M_PI * h / length);
  return 4.0 / (h * h) * t * t;
}

// --- deterministic field builders -------------------------------------------

// Independent uniform values on interior nodes, zero on the boundary.
inline orlicz::ScalarField random_interior_field(const orlicz::GridPtr& g,
                                                 std::uint64_t seed,
                                                 double amp = 1.0) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> dist(-amp, amp);
  orlicz::ScalarField u = orlicz::ScalarField::zeros(g);
  for (long n = 0; n < g->node_count(); ++n)
    if (!g->on_boundary(n)) u.v[std::size_t(n)] = dist(eng);
  return u;
}

// Smooth low-mode sine mixture; bounded gradients, so it stays inside the
// range of tabulated nonlinearities.
inline orlicz::ScalarField sine_mix(const orlicz::GridPtr& g,
                                    std::uint64_t seed, int modes,
                                    double amp) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> dist(-amp, amp);
  std::vector<double> ax(static_cast<std::size_t>(modes));
  std::vector<double> ay(static_cast<std::size_t>(modes));
  for (double& a : ax) a = dist(eng);
  for (double& a : ay) a = dist(eng);
  orlicz::ScalarField u = orlicz::ScalarField::zeros(g);
  for (long n = 0; n < g->node_count(); ++n) {
    const auto [x, y] = g->node_coord(n);
    double v = 0.0;
    for (int m = 1; m <= modes; ++m) {
      const double sx = std::sin(m * M_PI * x / g->lx());
      if (g->dim() == 1)
        v += ax[std::size_t(m - 1)] * sx;
      else
        v += sx * (ax[std::size_t(m - 1)] +
                   ay[std::size_t(m - 1)] * std::sin(m * M_PI * y / g->ly()));
    }
    u.v[std::size_t(n)] = v;
  }
  u.enforce_dirichlet();
  return u;
}

// Largest violation of odd symmetry about the interval midpoint.
inline double mirror_defect(const orlicz::ScalarField& u) {
  double d = 0.0;
  const std::size_t n = u.v.size();
  for (std::size_t i = 0; i < n; ++i)
    d = std::max(d, std::abs(u.v[i] + u.v[n - 1 - i]));
  return d;
}

}  // namespace oracle
