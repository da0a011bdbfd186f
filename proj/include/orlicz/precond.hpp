#pragma once

#include <memory>

#include "orlicz/grid.hpp"

namespace orlicz {

// Factorized discrete Dirichlet Laplacian (3-point stencil in 1D, 5-point in
// 2D, scaled by cell volume). Used as the descent metric: it equals the exact
// Hessian of the gradient term for Phi(t) = t^2/2 and stays a symmetric
// positive definite surrogate for every other family.
class Preconditioner {
 public:
  explicit Preconditioner(GridPtr grid);
  // Weighted variant: K_w = Hessian of sum_c w_c * (|grad u|_c)^2/2 * vol.
  // One weight per cell; weights must be positive.
  Preconditioner(GridPtr grid, const std::vector<double>& cell_weights);
  // Quasi-Newton variant: K_w plus, per cell, m_c * vol on the outer product
  // of the corner-averaging coefficients (the curvature block of a term
  // m_c * (mean u)_c^2 / 2 * vol). Mass weights may be negative; throws
  // numeric_error when the assembled matrix is singular or not factorizable.
  Preconditioner(GridPtr grid, const std::vector<double>& cell_weights,
                 const std::vector<double>& mass_cell_weights);
  ~Preconditioner();
  Preconditioner(Preconditioner&&) noexcept;
  Preconditioner& operator=(Preconditioner&&) noexcept;
  Preconditioner(const Preconditioner&) = delete;
  Preconditioner& operator=(const Preconditioner&) = delete;

  // Solves K d = g on interior nodes; d vanishes on the boundary.
  ScalarField apply(const ScalarField& g) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace orlicz
