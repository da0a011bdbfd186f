#include "orlicz/exponent_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orlicz {

ExponentField::ExponentField(GridPtr grid, std::vector<double> v)
    : grid_(std::move(grid)), v_(std::move(v)) {
  q_minus_ = *std::min_element(v_.begin(), v_.end());
  q_plus_ = *std::max_element(v_.begin(), v_.end());
  if (!(q_minus_ > 1.0) || !std::isfinite(q_plus_))
    throw std::invalid_argument(
        "exponent field must satisfy q(x) > 1 at every node");
}

ExponentField ExponentField::constant(GridPtr grid, double q) {
  std::vector<double> v(grid->node_count(), q);
  return ExponentField(std::move(grid), std::move(v));
}

ExponentField ExponentField::from_function(
    GridPtr grid, const std::function<double(double, double)>& q) {
  std::vector<double> v(grid->node_count());
  for (long k = 0; k < grid->node_count(); ++k) {
    const auto [x, y] = grid->node_coord(k);
    v[k] = q(x, y);
  }
  return ExponentField(std::move(grid), std::move(v));
}

}  // namespace orlicz
