#pragma once

#include <functional>

#include "orlicz/grid.hpp"

namespace orlicz {

// Variable exponent q(x) sampled at grid nodes, with its range cached.
// Every node value must satisfy q > 1.
class ExponentField {
 public:
  static ExponentField constant(GridPtr grid, double q);
  static ExponentField from_function(GridPtr grid,
                                     const std::function<double(double, double)>& q);

  const GridPtr& grid() const { return grid_; }
  const std::vector<double>& values() const { return v_; }
  double q_minus() const { return q_minus_; }
  double q_plus() const { return q_plus_; }

 private:
  ExponentField(GridPtr grid, std::vector<double> v);
  GridPtr grid_;
  std::vector<double> v_;
  double q_minus_, q_plus_;
};

}  // namespace orlicz
