#include "orlicz/modular.hpp"

#include <cmath>

#include "orlicz/luxemburg.hpp"

namespace orlicz {

double variable_exponent_modular(const ScalarField& u, const ExponentField& q) {
  if (u.grid != q.grid())
    throw std::invalid_argument("field and exponent live on different grids");
  const CellField ub = cell_average(u);
  const CellField qb = cell_average({q.grid(), q.values()});
  double s = 0.0;
  for (std::size_t c = 0; c < ub.v.size(); ++c)
    s += std::pow(std::abs(ub.v[c]), qb.v[c]);
  return s * u.grid->cell_volume();
}

double variable_exponent_norm(const ScalarField& u, const ExponentField& q) {
  if (u.grid != q.grid())
    throw std::invalid_argument("field and exponent live on different grids");
  const CellField ub = cell_average(u);
  const CellField qb = cell_average({q.grid(), q.values()});
  const double vol = u.grid->cell_volume();
  return luxemburg_norm_impl([&](double mu) {
    double s = 0.0;
    for (std::size_t c = 0; c < ub.v.size(); ++c)
      s += std::pow(std::abs(ub.v[c]) / mu, qb.v[c]);
    return s * vol;
  });
}

double gradient_modular(const YoungFunction& yf, const ScalarField& u, double k) {
  const CellField g = gradient_magnitude(u);
  const double vol = u.grid->cell_volume();
  double s = 0.0;
  for (double gc : g.v) s += yf.value(gc / k);
  return s * vol;
}

double sobolev_norm(const YoungFunction& yf, const ScalarField& u) {
  const CellField g = gradient_magnitude(u);
  const double vol = u.grid->cell_volume();
  return luxemburg_norm_impl([&](double k) {
    double s = 0.0;
    for (double gc : g.v) s += yf.value(gc / k);
    return s * vol;
  });
}

}  // namespace orlicz
