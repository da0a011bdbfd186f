#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace orlicz::quad {

// Gauss-Legendre rule on [-1,1]. Nodes/weights are generated once by Newton
// iteration on the Legendre recurrence, so no hard-coded constant tables.
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

const Rule& gauss_rule(int n);

template <class F>
double gauss(F&& f, double a, double b, const Rule& r) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
  return s * h;
}

template <class F>
double gauss7(F&& f, double a, double b) {
  return gauss(f, a, b, gauss_rule(7));
}

template <class F>
double gauss15(F&& f, double a, double b) {
  return gauss(f, a, b, gauss_rule(15));
}

namespace detail {
template <class F>
double adapt(F& f, double a, double b, double fa, double fm, double fb,
             double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Adaptive Simpson with absolute tolerance; depth-capped so degenerate
// integrands terminate.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol,
                        int max_depth = 48) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adapt(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

}  // namespace orlicz::quad
