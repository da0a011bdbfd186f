#include "orlicz/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace orlicz {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// log1p(x)/x, stable down to x = 0. Series branch below 1e-8 removes the
// 0/0 at the origin.
double log1p_over_x(double x) {
  if (x < 1e-8) return 1.0 - 0.5 * x + x * x / 3.0;
  return std::log1p(x) / x;
}

void validate_knots(const std::vector<std::pair<double, double>>& knots) {
  if (knots.size() < 2)
    throw std::invalid_argument("tabulated nonlinearity needs at least 2 knots");
  if (knots.front().first != 0.0 || knots.front().second != 0.0)
    throw std::invalid_argument("tabulated nonlinearity must start at (0, 0)");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first))
      throw std::invalid_argument("tabulated knot arguments must be strictly increasing");
    if (!(knots[i].second > knots[i - 1].second))
      throw std::invalid_argument("tabulated knot values must be strictly increasing");
    if (!std::isfinite(knots[i].first) || !std::isfinite(knots[i].second))
      throw std::invalid_argument("tabulated knots must be finite");
  }
}

double tabulated_phi(const Tabulated& tab, double a) {
  const auto& kn = tab.knots;
  if (a > kn.back().first)
    throw extrapolation_error(
        "tabulated nonlinearity queried at t beyond the last knot; "
        "refusing to extrapolate");
  auto it = std::upper_bound(
      kn.begin(), kn.end(), a,
      [](double v, const std::pair<double, double>& k) { return v < k.first; });
  const std::size_t hi = std::min<std::size_t>(it - kn.begin(), kn.size() - 1);
  const auto& [t0, f0] = kn[hi - 1];
  const auto& [t1, f1] = kn[hi];
  return f0 + (f1 - f0) * (a - t0) / (t1 - t0);
}

double tabulated_phi_inverse(const Tabulated& tab, double s) {
  const auto& kn = tab.knots;
  if (s > kn.back().second)
    throw extrapolation_error(
        "tabulated nonlinearity inverse queried beyond the last knot value");
  auto it = std::upper_bound(
      kn.begin(), kn.end(), s,
      [](double v, const std::pair<double, double>& k) { return v < k.second; });
  const std::size_t hi = std::min<std::size_t>(it - kn.begin(), kn.size() - 1);
  const auto& [t0, f0] = kn[hi - 1];
  const auto& [t1, f1] = kn[hi];
  return t0 + (t1 - t0) * (s - f0) / (f1 - f0);
}

}  // namespace

NonlinearitySpec::NonlinearitySpec(Family f) : family_(std::move(f)) {}

NonlinearitySpec NonlinearitySpec::pure_power(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("pure power family needs p > 1");
  return NonlinearitySpec{PurePower{p}};
}

NonlinearitySpec NonlinearitySpec::power_log(double p, double r) {
  if (!(p > 1.0) || !(r > 0.0))
    throw std::invalid_argument("power-log family needs p > 1 and r > 0");
  return NonlinearitySpec{PowerLog{p, r}};
}

NonlinearitySpec NonlinearitySpec::power_over_log(double p) {
  if (!(p > 2.0))
    throw std::invalid_argument("power-over-log family needs p > 2");
  return NonlinearitySpec{PowerOverLog{p}};
}

NonlinearitySpec NonlinearitySpec::tabulated(
    std::vector<std::pair<double, double>> knots) {
  validate_knots(knots);
  return NonlinearitySpec{Tabulated{std::move(knots)}};
}

double NonlinearitySpec::phi(double t) const {
  if (t == 0.0) return 0.0;
  const double a = std::abs(t);
  const double v = std::visit(
      overloaded{
          [&](const PurePower& f) { return std::pow(a, f.p - 1.0); },
          [&](const PowerLog& f) {
            return std::log1p(std::pow(a, f.r)) * std::pow(a, f.p - 1.0);
          },
          [&](const PowerOverLog& f) {
            return std::pow(a, f.p - 2.0) / log1p_over_x(a);
          },
          [&](const Tabulated& f) { return tabulated_phi(f, a); },
      },
      family_);
  return std::copysign(v, t);
}

double NonlinearitySpec::phi_inverse(double s) const {
  if (s == 0.0) return 0.0;
  const double b = std::abs(s);
  double v;
  if (const auto* pp = std::get_if<PurePower>(&family_)) {
    v = std::pow(b, 1.0 / (pp->p - 1.0));
  } else if (const auto* tab = std::get_if<Tabulated>(&family_)) {
    v = tabulated_phi_inverse(*tab, b);
  } else {
    // Geometric bisection: phi is strictly increasing with phi(0)=0 and
    // unbounded, so a bracket always exists in double range.
    double lo = 1e-300, hi = 1.0;
    while (phi(hi) < b) {
      hi *= 4.0;
      if (hi > 1e290) throw numeric_error("phi inverse argument out of range");
    }
    for (int i = 0; i < 120 && hi - lo > 1e-15 * hi; ++i) {
      const double mid = std::sqrt(lo * hi);
      (phi(mid) < b ? lo : hi) = mid;
    }
    v = 0.5 * (lo + hi);
  }
  return std::copysign(v, s);
}

double NonlinearitySpec::domain_max() const {
  if (const auto* tab = std::get_if<Tabulated>(&family_))
    return tab->knots.back().first;
  return std::numeric_limits<double>::infinity();
}

bool NonlinearitySpec::is_tabulated() const {
  return std::holds_alternative<Tabulated>(family_);
}

bool NonlinearitySpec::is_pure_power() const {
  return std::holds_alternative<PurePower>(family_);
}

std::optional<std::pair<double, double>> NonlinearitySpec::index_limits()
    const {
  // Elementary limits of t phi(t)/Phi(t).
  return std::visit(
      overloaded{
          [&](const PurePower& f) {
            return std::optional<std::pair<double, double>>{{f.p, f.p}};
          },
          [&](const PowerLog& f) {
            // Near zero phi ~ t^{p-1+r}, so the ratio tends to p + r;
            // at infinity the log factor is slowly varying and the ratio
            // tends to p.
            return std::optional<std::pair<double, double>>{{f.p + f.r, f.p}};
          },
          [&](const PowerOverLog& f) {
            // Near zero phi ~ t^{p-2}, ratio -> p - 1; at infinity -> p.
            return std::optional<std::pair<double, double>>{{f.p - 1.0, f.p}};
          },
          [&](const Tabulated&) {
            return std::optional<std::pair<double, double>>{};
          },
      },
      family_);
}

std::string NonlinearitySpec::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const PurePower& f) { os << "pure_power(p=" << f.p << ")"; },
                 [&](const PowerLog& f) {
                   os << "power_log(p=" << f.p << ", r=" << f.r << ")";
                 },
                 [&](const PowerOverLog& f) {
                   os << "power_over_log(p=" << f.p << ")";
                 },
                 [&](const Tabulated& f) {
                   os << "tabulated(" << f.knots.size() << " knots, t_max="
                      << f.knots.back().first << ")";
                 },
             },
             family_);
  return os.str();
}

}  // namespace orlicz
