#include "orlicz/young.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "orlicz/quad.hpp"

namespace orlicz {

namespace {

constexpr double kTableLow = 1e-9;
constexpr double kTableHigh = 1e18;
constexpr double kTableRatio = 1.02;
constexpr double kPhiCap = 1e290;  // stop the table before the integral overflows

// Local power-law exponent of phi at t, exact for pure powers and
// asymptotically exact for the log-corrected families as t -> 0.
template <class Phi>
double local_exponent(Phi&& phi, double t) {
  const double f1 = phi(t), f0 = phi(0.5 * t);
  if (f1 <= 0.0 || f0 <= 0.0) return 1.0;
  return std::log2(f1 / f0);
}

}  // namespace

struct YoungFunction::Impl {
  explicit Impl(NonlinearitySpec s) : spec(std::move(s)) {}

  NonlinearitySpec spec;
  double quad_tol = 1e-10;
  bool pure_power = false;
  double p = 0.0;  // pure power exponent
  bool tabulated = false;

  // Geometric grid with cumulative integrals; for tabulated data the grid is
  // the knot sequence itself and the cumulative sums are exact trapezoids.
  std::vector<double> t_nodes;
  std::vector<double> Phi_nodes;
  std::vector<double> phi_nodes;
  double log_t0 = 0.0, log_ratio = 1.0;

  double phi_at(double a) const { return spec.phi(a); }

  // Integral of phi over [0, t] for t below the first table node, via a
  // two-point power-law fit (the families behave like c t^gamma there).
  double head_integral(double t) const {
    if (t <= 0.0) return 0.0;
    const double f = phi_at(t);
    if (f == 0.0) return 0.0;
    const double gamma = local_exponent([this](double x) { return phi_at(x); }, t);
    return t * f / (gamma + 1.0);
  }

  void build_table() {
    if (tabulated) {
      const auto& kn = std::get<Tabulated>(spec.family()).knots;
      t_nodes.reserve(kn.size());
      phi_nodes.reserve(kn.size());
      Phi_nodes.assign(1, 0.0);
      for (const auto& [t, f] : kn) {
        t_nodes.push_back(t);
        phi_nodes.push_back(f);
      }
      for (std::size_t i = 1; i < kn.size(); ++i) {
        // phi is piecewise linear between knots, so trapezoids are exact.
        Phi_nodes.push_back(Phi_nodes[i - 1] +
                            0.5 * (t_nodes[i] - t_nodes[i - 1]) *
                                (phi_nodes[i] + phi_nodes[i - 1]));
      }
      return;
    }
    if (pure_power) return;

    const auto f = [this](double x) { return phi_at(x); };
    t_nodes.push_back(kTableLow);
    phi_nodes.push_back(f(kTableLow));
    // Head below the first node: power fit down to 1e-13, adaptive Simpson
    // from there up (the integrand is analytic away from the origin).
    double head = head_integral(1e-13);
    head += quad::adaptive_simpson(f, 1e-13, kTableLow,
                                   1e-14 * kTableLow * phi_nodes[0] + 1e-320);
    Phi_nodes.push_back(head);
    double t = kTableLow;
    while (t < kTableHigh && Phi_nodes.back() < kPhiCap) {
      const double t_next = t * kTableRatio;
      Phi_nodes.push_back(Phi_nodes.back() + quad::gauss15(f, t, t_next));
      t_nodes.push_back(t_next);
      phi_nodes.push_back(f(t_next));
      t = t_next;
    }
    log_t0 = std::log(t_nodes.front());
    log_ratio = std::log(kTableRatio);
  }

  double value_at(double a) const {
    if (a == 0.0) return 0.0;
    if (pure_power) return std::pow(a, p) / p;
    if (tabulated) {
      if (a > t_nodes.back())
        throw extrapolation_error(
            "tabulated Young function queried beyond the last knot");
      auto it = std::upper_bound(t_nodes.begin(), t_nodes.end(), a);
      std::size_t hi = std::min<std::size_t>(it - t_nodes.begin(),
                                             t_nodes.size() - 1);
      const std::size_t lo = hi - 1;
      const double fa = phi_at(a);
      return Phi_nodes[lo] + 0.5 * (a - t_nodes[lo]) * (phi_nodes[lo] + fa);
    }
    if (a < t_nodes.front()) return head_integral(a);
    const auto f = [this](double x) { return phi_at(x); };
    if (a > t_nodes.back()) {
      const double scale = Phi_nodes.back();
      return scale + quad::adaptive_simpson(f, t_nodes.back(), a,
                                            1e-13 * scale + 1e-320);
    }
    // O(1) segment lookup on the geometric grid, then a short Gauss panel.
    auto idx = static_cast<std::ptrdiff_t>((std::log(a) - log_t0) / log_ratio);
    idx = std::clamp<std::ptrdiff_t>(idx, 0,
                                     static_cast<std::ptrdiff_t>(t_nodes.size()) - 2);
    while (idx > 0 && t_nodes[idx] > a) --idx;
    while (idx + 2 < static_cast<std::ptrdiff_t>(t_nodes.size()) &&
           t_nodes[idx + 1] < a)
      ++idx;
    return Phi_nodes[idx] + quad::gauss7(f, t_nodes[idx], a);
  }

  double inverse_at(double s) const {
    if (s == 0.0) return 0.0;
    if (pure_power) return std::pow(p * s, 1.0 / p);
    if (tabulated) {
      if (s > Phi_nodes.back())
        throw extrapolation_error(
            "tabulated Young function inverse queried beyond the last knot");
      auto it = std::upper_bound(Phi_nodes.begin(), Phi_nodes.end(), s);
      std::size_t hi = std::min<std::size_t>(it - Phi_nodes.begin(),
                                             Phi_nodes.size() - 1);
      const std::size_t lo = hi - 1;
      // Piecewise quadratic cumulative: solve (m/2)x^2 + phi_lo x = s - C_lo.
      const double m = (phi_nodes[hi] - phi_nodes[lo]) /
                       (t_nodes[hi] - t_nodes[lo]);
      const double rhs = s - Phi_nodes[lo];
      const double b = phi_nodes[lo];
      double x;
      if (std::abs(m) < 1e-300 * std::abs(b))
        x = rhs / b;
      else
        x = (-b + std::sqrt(b * b + 2.0 * m * rhs)) / m;
      return t_nodes[lo] + x;
    }
    if (s < Phi_nodes.front()) {
      // Power model of the head region, inverted.
      const double t0 = t_nodes.front();
      const double gamma =
          local_exponent([this](double x) { return phi_at(x); }, t0);
      return t0 * std::pow(s / Phi_nodes.front(), 1.0 / (gamma + 1.0));
    }
    if (s > Phi_nodes.back())
      throw numeric_error("Young function inverse beyond cached range");
    auto it = std::upper_bound(Phi_nodes.begin(), Phi_nodes.end(), s);
    std::size_t hi = std::min<std::size_t>(it - Phi_nodes.begin(),
                                           Phi_nodes.size() - 1);
    double lo_t = t_nodes[hi - 1], hi_t = t_nodes[hi];
    // Newton from the segment midpoint, bisection fallback.
    double x = 0.5 * (lo_t + hi_t);
    for (int i = 0; i < 60 && hi_t - lo_t > 1e-14 * hi_t; ++i) {
      const double v = value_at(x) - s;
      (v < 0.0 ? lo_t : hi_t) = x;
      const double d = phi_at(x);
      double xn = (d > 0.0) ? x - v / d : 0.5 * (lo_t + hi_t);
      if (!(xn > lo_t && xn < hi_t)) xn = 0.5 * (lo_t + hi_t);
      x = xn;
    }
    return x;
  }

  void sanity_checks() const {
    // Light N-function probes: strict monotonicity of phi, convexity of the
    // cumulative values, vanishing slope at 0 and unbounded slope at the top
    // of the range.
    const double hi = tabulated ? t_nodes.back() : 1e6;
    double prev = 0.0;
    for (double m : {1e-8, 1e-6, 1e-4, 1e-2, 1.0}) {
      const double f = phi_at(m * hi);
      if (!(f > prev))
        throw std::invalid_argument(
            "nonlinearity is not strictly increasing on the sampled grid");
      prev = f;
    }
    const double a = hi * 1e-4, b = hi * 1e-2;
    const double mid = value_at(0.5 * (a + b));
    if (mid > 0.5 * (value_at(a) + value_at(b)) * (1.0 + 1e-9))
      throw std::invalid_argument("Young function failed midpoint convexity probe");
  }
};

YoungFunction::YoungFunction(NonlinearitySpec spec, double quad_tol) {
  auto impl = std::make_shared<Impl>(std::move(spec));
  impl->quad_tol = quad_tol;
  impl->tabulated = impl->spec.is_tabulated();
  if (impl->spec.is_pure_power()) {
    impl->pure_power = true;
    impl->p = std::get<PurePower>(impl->spec.family()).p;
  }
  impl->build_table();
  impl->sanity_checks();
  impl_ = std::move(impl);
}

double YoungFunction::value(double t) const { return impl_->value_at(std::abs(t)); }
double YoungFunction::phi(double t) const { return impl_->spec.phi(t); }
double YoungFunction::phi_inverse(double s) const {
  return impl_->spec.phi_inverse(s);
}

double YoungFunction::inverse(double s) const {
  if (s < 0.0) throw std::invalid_argument("Young function inverse needs s >= 0");
  return impl_->inverse_at(s);
}

double YoungFunction::conjugate(double t) const {
  if (t < 0.0) throw std::invalid_argument("conjugate is evaluated at t >= 0");
  if (t == 0.0) return 0.0;
  const double s = impl_->spec.phi_inverse(t);
  return s * t - impl_->value_at(s);
}

const NonlinearitySpec& YoungFunction::spec() const { return impl_->spec; }

double YoungFunction::table_max() const {
  if (impl_->pure_power) return 1e300;
  return impl_->t_nodes.back();
}

}  // namespace orlicz
