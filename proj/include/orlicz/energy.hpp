#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "orlicz/exponent_field.hpp"
#include "orlicz/fields.hpp"
#include "orlicz/indices.hpp"
#include "orlicz/precond.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

// Everything a solve needs, bundled and immutable: the Young function, the
// exponent field, the mesh, the growth indices of Phi, and a seed for the
// deterministic probe fields. Cheap to copy (shared state).
class EnergyContext {
 public:
  static EnergyContext make(GridPtr grid, YoungFunction yf, ExponentField q,
                            std::uint64_t probe_seed = 0x5eed5u);

  const GridPtr& grid() const;
  const YoungFunction& yf() const;
  const ExponentField& exponent() const;
  const GrowthIndices& indices() const;
  const CellField& qbar() const;  // exponent averaged to cell centers
  std::uint64_t probe_seed() const;

  // Lazily factorized discrete Laplacian used as descent metric.
  const Preconditioner& precond() const;

 private:
  struct State;
  explicit EnergyContext(std::shared_ptr<const State> s) : s_(std::move(s)) {}
  std::shared_ptr<const State> s_;
};

// J(u) = integral Phi(|grad u|) - lambda * integral |u|^{q(x)} / q(x),
// under the fixed cell quadrature. Even in u.
double energy(const EnergyContext& ctx, const ScalarField& u, double lambda);

// Exact derivative of the discrete energy with respect to interior node
// values; identically zero on boundary nodes.
ScalarField energy_gradient(const EnergyContext& ctx, const ScalarField& u,
                            double lambda);

// integral Phi(|grad u|) / integral |u|^{q(x)}; throws for a vanishing
// denominator.
double rayleigh_quotient(const EnergyContext& ctx, const ScalarField& u);

struct QuotientSample {
  double t = 0.0;
  double quotient = 0.0;
};

// Rayleigh quotient along the ray t -> t*u for each t in t_list.
std::vector<QuotientSample> quotient_scaling_sweep(const EnergyContext& ctx,
                                                   const ScalarField& u,
                                                   const std::vector<double>& t_list);

}  // namespace orlicz
