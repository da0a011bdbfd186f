#pragma once

#include "orlicz/errors.hpp"
#include "orlicz/grid.hpp"

namespace orlicz {

// Per-cell Euclidean magnitude of the discrete gradient. Axis derivatives
// are forward differences averaged to the cell center, which makes the
// discrete energy an exact function of the node values (so its chain-rule
// derivative is the exact gradient of the discrete functional).
CellField gradient_magnitude(const ScalarField& u);

// Midpoint-rule cell averages of a node field.
CellField cell_average(const ScalarField& u);

// Midpoint quadrature: sum of cell values times cell volume.
double integrate(const CellField& f);

// Smooth radial bump: 1 on the inner ball, a mollifier profile
// exp(1 - 1/(1-s^2)) across the annulus, 0 outside. The outer ball must sit
// strictly inside the domain.
ScalarField build_bump(GridPtr grid, const std::array<double, 2>& center,
                       double r_in, double r_out);

// k bumps with pairwise disjoint supports placed on a deterministic
// sub-lattice, each support leaving more than half of the remaining domain
// free. Throws capacity_error (carrying the largest feasible k) when the
// mesh cannot resolve that many bumps.
std::vector<ScalarField> build_disjoint_bumps(GridPtr grid, int k);

// Measure of the set of cells touching the support of u.
double support_measure(const ScalarField& u);

}  // namespace orlicz
