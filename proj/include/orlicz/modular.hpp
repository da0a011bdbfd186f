#pragma once

#include "orlicz/exponent_field.hpp"
#include "orlicz/fields.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

// Variable-exponent modular: integral of |u|^{q(x)} with u and q averaged to
// cell centers (midpoint quadrature).
double variable_exponent_modular(const ScalarField& u, const ExponentField& q);

// Luxemburg norm of u in the variable-exponent Lebesgue space.
double variable_exponent_norm(const ScalarField& u, const ExponentField& q);

// Integral of Phi(|grad u| / k) under the cell quadrature.
double gradient_modular(const YoungFunction& yf, const ScalarField& u, double k);

// Orlicz-Sobolev norm: Luxemburg norm of the gradient magnitude.
double sobolev_norm(const YoungFunction& yf, const ScalarField& u);

}  // namespace orlicz
