#include "orlicz/indices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace orlicz {

namespace {

// Geometric sample grid clipped to the range a tabulated family covers.
std::pair<double, double> clip_range(const YoungFunction& yf, double t_min,
                                     double t_max) {
  const double dm = yf.spec().domain_max();
  return {t_min, std::min(t_max, dm)};
}

}  // namespace

GrowthIndices estimate_indices(const YoungFunction& yf, double t_min,
                               double t_max, int n_samples) {
  if (n_samples < 100)
    throw std::invalid_argument("index estimation needs at least 100 samples");
  if (!(t_min > 0.0) || !(t_max > t_min))
    throw std::invalid_argument("index estimation needs 0 < t_min < t_max");

  auto [lo, hi] = clip_range(yf, t_min, t_max);
  if (!(hi > lo))
    throw std::invalid_argument("sample range collapses inside the tabulated domain");

  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  const double step = std::log(hi / lo) / (n_samples - 1);
  for (int i = 0; i < n_samples; ++i) {
    // exp/log round-trip can overshoot a tabulated endpoint by an ulp
    const double t = std::min(hi, lo * std::exp(step * i));
    const double Phi = yf.value(t);
    if (Phi == 0.0)
      throw std::domain_error("Phi vanished at a positive sample point");
    const double ratio = t * yf.phi(t) / Phi;
    rmin = std::min(rmin, ratio);
    rmax = std::max(rmax, ratio);
  }

  if (auto limits = yf.spec().index_limits()) {
    const auto [at_zero, at_inf] = *limits;
    rmin = std::min({rmin, at_zero, at_inf});
    rmax = std::max({rmax, at_zero, at_inf});
  }

  GrowthIndices out;
  out.p0 = rmin;
  out.p0_sup = rmax;
  std::ostringstream os;
  os << "log grid [" << lo << ", " << hi << "], " << n_samples << " samples";
  if (yf.spec().index_limits()) os << ", endpoint limits applied";
  out.grid_used = os.str();
  return out;
}

Delta2Report check_delta2(const YoungFunction& yf) {
  // Tail probe decades; for tabulated data shrink into the covered range.
  double lo = 1e2, hi = 1e6;
  const double dm = yf.spec().domain_max();
  if (dm < hi) {
    hi = dm;
    lo = std::min(lo, 1e-2 * dm);
  }
  Delta2Report rep;
  rep.liminf_est = std::numeric_limits<double>::infinity();
  rep.limsup_est = 0.0;
  const int n = 200;
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    // exp/log round-trip can overshoot a tabulated endpoint by an ulp
    const double t = std::min(hi, lo * std::exp(step * i));
    const double ratio = t * yf.phi(t) / yf.value(t);
    rep.liminf_est = std::min(rep.liminf_est, ratio);
    rep.limsup_est = std::max(rep.limsup_est, ratio);
  }
  rep.pass = rep.liminf_est > 1.0 && rep.limsup_est < 1e6;
  return rep;
}

}  // namespace orlicz
