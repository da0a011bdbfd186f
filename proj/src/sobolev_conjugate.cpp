#include "orlicz/sobolev_conjugate.hpp"

#include <algorithm>
#include <cmath>

#include "orlicz/quad.hpp"

namespace orlicz {

namespace {

Trend classify(const std::vector<double>& increments) {
  // Ratios of consecutive decade integrals; geometric decay of the tail
  // certifies convergence, geometric growth divergence.
  if (increments.size() < 4) return Trend::Inconclusive;
  bool all_shrink = true, all_grow = true;
  for (std::size_t i = increments.size() - 3; i < increments.size(); ++i) {
    const double prev = increments[i - 1];
    if (prev <= 0.0) return Trend::Inconclusive;
    const double r = increments[i] / prev;
    all_shrink = all_shrink && r < 0.95;
    all_grow = all_grow && r > 1.02;
  }
  if (all_shrink) return Trend::Convergent;
  if (all_grow) return Trend::Divergent;
  return Trend::Inconclusive;
}

}  // namespace

SobolevAuditReport sobolev_conjugate_audit(const YoungFunction& yf, int N) {
  if (N < 1) throw std::invalid_argument("audit dimension must be >= 1");
  const double e = -(N + 1.0) / N;
  const auto integrand = [&](double s) {
    return yf.inverse(s) * std::pow(s, e);
  };

  SobolevAuditReport rep;
  // Near zero: integrals over [10^{-(j+1)}, 10^{-j}]; increments must shrink.
  for (int j = 1; j <= 11; ++j) {
    const double hi = std::pow(10.0, -j);
    const double lo = 0.1 * hi;
    const double scale = integrand(hi) * (hi - lo);
    rep.near_zero_increments.push_back(
        quad::adaptive_simpson(integrand, lo, hi, 1e-9 * scale + 1e-320));
  }
  rep.near_zero = classify(rep.near_zero_increments);
  rep.near_zero_finite = rep.near_zero == Trend::Convergent;

  // At infinity: integrals over [10^j, 10^{j+1}]; increments must not shrink.
  for (int j = 0; j <= 8; ++j) {
    const double lo = std::pow(10.0, j);
    const double hi = 10.0 * lo;
    const double scale = integrand(lo) * (hi - lo);
    rep.at_infinity_increments.push_back(
        quad::adaptive_simpson(integrand, lo, hi, 1e-9 * scale + 1e-320));
  }
  rep.at_infinity = classify(rep.at_infinity_increments);
  rep.at_infinity_divergent = rep.at_infinity == Trend::Divergent;
  return rep;
}

struct SobolevConjugate::Impl {
  std::vector<double> tau;  // argument grid of the inverse
  std::vector<double> G;    // cumulative integral = Phi_star^{-1}(tau)
};

SobolevConjugate::SobolevConjugate(const YoungFunction& yf, int N) {
  if (N < 1) throw std::invalid_argument("conjugate dimension must be >= 1");
  const double e = -(N + 1.0) / N;
  const auto integrand = [&, e](double s) { return yf.inverse(s) * std::pow(s, e); };

  auto impl = std::make_shared<Impl>();
  const double tau0 = 1e-30;
  // Head below tau0 by a local power fit; a nonintegrable head means the
  // inverse (and hence Phi_star) is not defined.
  {
    const double f1 = integrand(tau0), f2 = integrand(2.0 * tau0);
    const double expo = std::log2(f2 / f1);
    if (!(expo > -1.0))
      throw numeric_error(
          "near-zero part of the conjugate integral diverges; "
          "growth conjugate undefined");
    impl->tau.push_back(tau0);
    impl->G.push_back(tau0 * f1 / (expo + 1.0));
  }

  const double ratio = 1.26;
  const double tau_cap =
      std::min(1e44, 0.99 * yf.value(std::min(yf.table_max(), 1e300)));
  double t = tau0;
  while (t < tau_cap) {
    double t_next = std::min(t * ratio, tau_cap);
    impl->G.push_back(impl->G.back() + quad::gauss15(integrand, t, t_next));
    impl->tau.push_back(t_next);
    if (t_next >= tau_cap) break;
    t = t_next;
  }
  impl_ = std::move(impl);
}

double SobolevConjugate::inverse(double t) const {
  if (t <= 0.0) return 0.0;
  const auto& tau = impl_->tau;
  const auto& G = impl_->G;
  if (t <= tau.front()) return G.front() * (t / tau.front());
  if (t > tau.back()) throw numeric_error("conjugate inverse beyond cached range");
  auto it = std::upper_bound(tau.begin(), tau.end(), t);
  const std::size_t hi = std::min<std::size_t>(it - tau.begin(), tau.size() - 1);
  const std::size_t lo = hi - 1;
  // Log-linear interpolation on the geometric grid.
  const double w = std::log(t / tau[lo]) / std::log(tau[hi] / tau[lo]);
  return G[lo] * std::pow(G[hi] / G[lo], w);
}

double SobolevConjugate::value(double x) const {
  if (x <= 0.0) return 0.0;
  const auto& tau = impl_->tau;
  const auto& G = impl_->G;
  if (x > G.back())
    throw numeric_error("growth conjugate argument beyond cached reach");
  if (x <= G.front()) return tau.front() * (x / G.front());
  auto it = std::upper_bound(G.begin(), G.end(), x);
  const std::size_t hi = std::min<std::size_t>(it - G.begin(), G.size() - 1);
  const std::size_t lo = hi - 1;
  const double w = std::log(x / G[lo]) / std::log(G[hi] / G[lo]);
  return tau[lo] * std::pow(tau[hi] / tau[lo], w);
}

double SobolevConjugate::max_reach() const { return impl_->G.back(); }

bool condition_decay_probe(const YoungFunction& yf, double q_plus,
                           const std::vector<double>& k_list, int N) {
  if (!(q_plus > 1.0))
    throw std::invalid_argument("decay probe needs q_plus > 1");
  if (k_list.empty())
    throw std::invalid_argument("decay probe needs at least one k");
  SobolevConjugate star(yf, N);
  for (double k : k_list) {
    if (!(k > 0.0)) throw std::invalid_argument("decay probe needs k > 0");
    // Decade grid anchored at the largest argument the cached conjugate can
    // resolve (steeply growing conjugates cover a shorter span).
    const double t_hi = std::min(1e6, 0.99 * star.max_reach() / k);
    if (!(t_hi > 0.0)) return false;
    std::vector<double> ratio;
    for (int j = 0; j <= 6; ++j) {
      const double t = t_hi * std::pow(10.0, j - 6);
      ratio.push_back(std::pow(t, q_plus) / star.value(k * t));
    }
    // Strict decay over the three largest decade steps.
    for (std::size_t i = ratio.size() - 3; i < ratio.size(); ++i)
      if (!(ratio[i] < ratio[i - 1])) return false;
  }
  return true;
}

}  // namespace orlicz
