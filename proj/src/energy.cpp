#include "orlicz/energy.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace orlicz {

struct EnergyContext::State {
  GridPtr grid;
  YoungFunction yf;
  ExponentField q;
  GrowthIndices indices;
  CellField qbar;
  std::uint64_t probe_seed;

  mutable std::once_flag precond_once;
  mutable std::unique_ptr<Preconditioner> precond;

  State(GridPtr g, YoungFunction y, ExponentField qq, std::uint64_t seed)
      : grid(std::move(g)),
        yf(std::move(y)),
        q(std::move(qq)),
        indices(estimate_indices(yf)),
        qbar(cell_average({grid, q.values()})),
        probe_seed(seed) {}
};

EnergyContext EnergyContext::make(GridPtr grid, YoungFunction yf,
                                  ExponentField q, std::uint64_t probe_seed) {
  if (!grid) throw std::invalid_argument("null grid");
  if (q.grid() != grid)
    throw std::invalid_argument("exponent field lives on a different grid");
  return EnergyContext(std::make_shared<const State>(
      std::move(grid), std::move(yf), std::move(q), probe_seed));
}

const GridPtr& EnergyContext::grid() const { return s_->grid; }
const YoungFunction& EnergyContext::yf() const { return s_->yf; }
const ExponentField& EnergyContext::exponent() const { return s_->q; }
const GrowthIndices& EnergyContext::indices() const { return s_->indices; }
const CellField& EnergyContext::qbar() const { return s_->qbar; }
std::uint64_t EnergyContext::probe_seed() const { return s_->probe_seed; }

const Preconditioner& EnergyContext::precond() const {
  std::call_once(s_->precond_once, [this] {
    s_->precond = std::make_unique<Preconditioner>(s_->grid);
  });
  return *s_->precond;
}

namespace {

void check_args(const EnergyContext& ctx, const ScalarField& u, double lambda) {
  if (u.grid != ctx.grid())
    throw std::invalid_argument("field and context grids differ");
  if (!(lambda >= 0.0))
    throw std::invalid_argument("lambda must be nonnegative");
}

// d/du of |u|^{qb}/qb, with the continuous extension 0 at u = 0.
double mass_derivative(double ub, double qb) {
  if (ub == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(ub), qb - 1.0), ub);
}

}  // namespace

double energy(const EnergyContext& ctx, const ScalarField& u, double lambda) {
  check_args(ctx, u, lambda);
  const CellField g = gradient_magnitude(u);
  const CellField ub = cell_average(u);
  const std::vector<double>& qb = ctx.qbar().v;
  const YoungFunction& yf = ctx.yf();
  double grad_part = 0.0, mass_part = 0.0;
  for (std::size_t c = 0; c < g.v.size(); ++c) {
    grad_part += yf.value(g.v[c]);
    mass_part += std::pow(std::abs(ub.v[c]), qb[c]) / qb[c];
  }
  const double vol = ctx.grid()->cell_volume();
  return grad_part * vol - lambda * mass_part * vol;
}

ScalarField energy_gradient(const EnergyContext& ctx, const ScalarField& u,
                            double lambda) {
  check_args(ctx, u, lambda);
  const Grid& g = *ctx.grid();
  const std::vector<double>& qb = ctx.qbar().v;
  const YoungFunction& yf = ctx.yf();
  const double vol = g.cell_volume();
  ScalarField out = ScalarField::zeros(ctx.grid());

  if (g.dim() == 1) {
    const double h = g.hx();
    for (int c = 0; c < g.nx(); ++c) {
      const double d = (u.v[c + 1] - u.v[c]) / h;
      if (d != 0.0) {
        const double t = std::copysign(yf.phi(std::abs(d)), d) * (vol / h);
        out.v[c + 1] += t;
        out.v[c] -= t;
      }
      const double ub = 0.5 * (u.v[c] + u.v[c + 1]);
      const double w = lambda * mass_derivative(ub, qb[c]) * vol * 0.5;
      out.v[c] -= w;
      out.v[c + 1] -= w;
    }
  } else {
    const double hx = g.hx(), hy = g.hy();
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        const long n00 = g.node_index(i, j), n10 = g.node_index(i + 1, j);
        const long n01 = g.node_index(i, j + 1), n11 = g.node_index(i + 1, j + 1);
        const double dx = (u.v[n10] - u.v[n00]) / hx;
        const double dy = (u.v[n01] - u.v[n00]) / hy;
        const double gm = std::sqrt(dx * dx + dy * dy);
        if (gm > 0.0) {
          const double w = yf.phi(gm) / gm;
          const double tx = w * dx * (vol / hx);
          const double ty = w * dy * (vol / hy);
          out.v[n10] += tx;
          out.v[n01] += ty;
          out.v[n00] -= tx + ty;
        }
        const long c = g.cell_index(i, j);
        const double ub = 0.25 * (u.v[n00] + u.v[n10] + u.v[n01] + u.v[n11]);
        const double w = lambda * mass_derivative(ub, qb[c]) * vol * 0.25;
        out.v[n00] -= w;
        out.v[n10] -= w;
        out.v[n01] -= w;
        out.v[n11] -= w;
      }
    }
  }
  out.enforce_dirichlet();
  return out;
}

double rayleigh_quotient(const EnergyContext& ctx, const ScalarField& u) {
  check_args(ctx, u, 0.0);
  const CellField g = gradient_magnitude(u);
  const CellField ub = cell_average(u);
  const std::vector<double>& qb = ctx.qbar().v;
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < g.v.size(); ++c) {
    num += ctx.yf().value(g.v[c]);
    den += std::pow(std::abs(ub.v[c]), qb[c]);
  }
  if (!(den > 0.0))
    throw std::domain_error("Rayleigh quotient undefined: vanishing field");
  return num / den;
}

std::vector<QuotientSample> quotient_scaling_sweep(
    const EnergyContext& ctx, const ScalarField& u,
    const std::vector<double>& t_list) {
  std::vector<QuotientSample> out;
  out.reserve(t_list.size());
  for (double t : t_list) {
    if (!(t > 0.0)) throw std::invalid_argument("scaling factors must be > 0");
    out.push_back({t, rayleigh_quotient(ctx, scaled(u, t))});
  }
  return out;
}

}  // namespace orlicz
