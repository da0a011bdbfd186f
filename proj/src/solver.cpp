#include "orlicz/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "orlicz/errors.hpp"
#include "orlicz/modular.hpp"

namespace orlicz {

double lambda_star(double rho, double c1, double q_minus, double p0_sup) {
  if (!(c1 > 0.0)) throw std::domain_error("embedding constant must be positive");
  if (!(rho > 0.0 && rho < std::min(1.0, 1.0 / c1)))
    throw std::domain_error("radius must satisfy 0 < rho < min(1, 1/c1)");
  if (!(q_minus < p0_sup))
    throw std::domain_error("threshold needs q_minus < p0_sup");
  return 0.5 * std::pow(rho, p0_sup - q_minus) * q_minus / std::pow(c1, q_minus);
}

namespace {

constexpr double kPi = 3.14159'26535'89793'23846;

// Deterministic uniform in [-1,1] straight off the engine words (the engine
// sequence is fully specified, unlike the standard distributions).
double sym_uniform(std::mt19937_64& rng) {
  return 2.0 * (double(rng() >> 11) * 0x1.0p-53) - 1.0;
}

double tent(double x, double center, double halfwidth) {
  return std::max(0.0, 1.0 - std::abs(x - center) / halfwidth);
}

}  // namespace

std::vector<ScalarField> standard_probe_fields(const EnergyContext& ctx,
                                               int n_samples) {
  const GridPtr& G = ctx.grid();
  std::vector<ScalarField> out;
  if (G->dim() == 1) {
    const double L = G->lx();
    for (int m = 1; m <= 8; ++m) {
      out.push_back(ScalarField::from_function(
          G, [&](double x, double) { return std::sin(m * kPi * x / L); }));
    }
    out.push_back(build_bump(G, {0.5 * L, 0.0}, 0.125 * L, 0.25 * L));
    out.push_back(build_bump(G, {0.5 * L, 0.0}, 0.05 * L, 0.10 * L));
    out.push_back(build_bump(G, {0.3 * L, 0.0}, 0.06 * L, 0.12 * L));
    out.push_back(ScalarField::from_function(
        G, [&](double x, double) { return tent(x, 0.5 * L, 0.5 * L); }));
    out.push_back(ScalarField::from_function(
        G, [&](double x, double) { return tent(x, 0.35 * L, 0.3 * L); }));
  } else {
    const double Lx = G->lx(), Ly = G->ly();
    for (int mi = 1; mi <= 3; ++mi) {
      for (int mj = 1; mj <= 3; ++mj) {
        out.push_back(ScalarField::from_function(G, [&](double x, double y) {
          return std::sin(mi * kPi * x / Lx) * std::sin(mj * kPi * y / Ly);
        }));
      }
    }
    const double s = std::min(Lx, Ly);
    out.push_back(build_bump(G, {0.5 * Lx, 0.5 * Ly}, 0.1 * s, 0.2 * s));
    out.push_back(build_bump(G, {0.3 * Lx, 0.35 * Ly}, 0.05 * s, 0.1 * s));
    out.push_back(ScalarField::from_function(G, [&](double x, double y) {
      return tent(x, 0.5 * Lx, 0.5 * Lx) * tent(y, 0.5 * Ly, 0.5 * Ly);
    }));
  }

  std::mt19937_64 rng(ctx.probe_seed());
  while (int(out.size()) < n_samples) {
    if (G->dim() == 1) {
      std::array<double, 8> c{};
      for (double& ci : c) ci = sym_uniform(rng);
      const double L = G->lx();
      out.push_back(ScalarField::from_function(G, [&, c](double x, double) {
        double v = 0.0;
        for (int m = 1; m <= 8; ++m) v += c[m - 1] * std::sin(m * kPi * x / L);
        return v;
      }));
    } else {
      std::array<double, 9> c{};
      for (double& ci : c) ci = sym_uniform(rng);
      const double Lx = G->lx(), Ly = G->ly();
      out.push_back(ScalarField::from_function(G, [&, c](double x, double y) {
        double v = 0.0;
        for (int mi = 1; mi <= 3; ++mi)
          for (int mj = 1; mj <= 3; ++mj)
            v += c[3 * (mi - 1) + (mj - 1)] * std::sin(mi * kPi * x / Lx) *
                 std::sin(mj * kPi * y / Ly);
        return v;
      }));
    }
  }
  return out;
}

double estimate_embedding_constant(const EnergyContext& ctx, int n_samples) {
  if (n_samples < 32)
    throw std::invalid_argument("embedding estimate needs at least 32 probes");
  double best = 0.0;
  bool any = false;
  for (const ScalarField& u : standard_probe_fields(ctx, n_samples)) {
    const double ns = sobolev_norm(ctx.yf(), u);
    if (!(ns > 1e-300)) continue;  // degenerate probe
    const double nv = variable_exponent_norm(u, ctx.exponent());
    best = std::max(best, nv / ns);
    any = true;
  }
  if (!any) throw numeric_error("all embedding probes were degenerate");
  return 1.25 * best;
}

ScalarField negative_direction_seed(const EnergyContext& ctx, double lambda,
                                    double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  const GridPtr& G = ctx.grid();
  const ExponentField& q = ctx.exponent();

  // Bump covering the region where q is smallest (the whole domain when q is
  // constant), kept strictly inside the box.
  double cx = 0.5 * G->lx(), cy = G->dim() == 2 ? 0.5 * G->ly() : 0.0;
  if (q.q_plus() - q.q_minus() > 1e-12) {
    long best = 0;
    for (long k = 1; k < G->node_count(); ++k)
      if (q.values()[k] < q.values()[best]) best = k;
    const auto [bx, by] = G->node_coord(best);
    cx = std::clamp(bx, 0.15 * G->lx(), 0.85 * G->lx());
    if (G->dim() == 2) cy = std::clamp(by, 0.15 * G->ly(), 0.85 * G->ly());
  }
  double r_out = 0.8 * std::min(cx, G->lx() - cx);
  if (G->dim() == 2) r_out = std::min(r_out, 0.8 * std::min(cy, G->ly() - cy));
  const ScalarField bump = build_bump(G, {cx, cy}, 0.5 * r_out, r_out);
  const double nb = sobolev_norm(ctx.yf(), bump);
  if (!(nb > 0.0)) return ScalarField::zeros(G);

  for (double t = 1e-1; t >= 0.99e-6; t *= 0.1) {
    if (!(t * nb < rho)) continue;
    if (!(energy(ctx, scaled(bump, t), lambda) < 0.0)) continue;
    // Grow the seed while it stays well inside the ball and keeps J < 0.
    while (2.0 * t * nb < 0.5 * rho &&
           energy(ctx, scaled(bump, 2.0 * t), lambda) < 0.0)
      t *= 2.0;
    return scaled(bump, t);
  }
  return ScalarField::zeros(G);
}

GeometryReport check_mountain_geometry(const EnergyContext& ctx, double lambda,
                                       double rho) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  const double c1 = estimate_embedding_constant(ctx, 48);
  GeometryReport rep;
  rep.rho = rho;
  rep.c1 = c1;
  rep.lambda_star = lambda_star(rho, c1, ctx.exponent().q_minus(),
                                ctx.indices().p0_sup);  // validates rho too

  double inf_est = std::numeric_limits<double>::infinity();
  for (const ScalarField& u : standard_probe_fields(ctx, 32)) {
    const double ns = sobolev_norm(ctx.yf(), u);
    if (!(ns > 1e-300)) continue;
    inf_est = std::min(inf_est, energy(ctx, scaled(u, rho / ns), lambda));
  }
  rep.sphere_inf_estimate = inf_est;

  rep.descent_direction_found =
      negative_direction_seed(ctx, lambda, rho).max_abs() > 0.0;

  const double q_minus = ctx.exponent().q_minus();
  const double p0_sup = ctx.indices().p0_sup;
  if (lambda < rep.lambda_star)
    rep.alpha = 0.5 * std::pow(rho, p0_sup);
  else
    rep.alpha = std::pow(rho, p0_sup) -
                lambda / q_minus * std::pow(c1, q_minus) * std::pow(rho, q_minus);
  return rep;
}

namespace {

// Quasi-Newton metric levels:
//   0 — weighted Laplacian (local diffusion phi(g)/g) plus the mass-term
//       curvature -lambda (qbar-1) |ubar|^{qbar-2}; closest to the true
//       Hessian, may fail positive definiteness away from minima;
//   1 — weighted Laplacian alone;
//   2 — plain Laplacian (nullptr: caller uses the shared one).
std::unique_ptr<Preconditioner> make_metric(const EnergyContext& ctx,
                                            const ScalarField& u,
                                            double lambda, int level) {
  if (level >= 2) return nullptr;
  const CellField g = gradient_magnitude(u);
  std::vector<double> w(g.v.size(), 0.0);
  double wmax = 0.0;
  for (std::size_t c = 0; c < g.v.size(); ++c) {
    if (g.v[c] > 1e-150) {
      w[c] = ctx.yf().phi(g.v[c]) / g.v[c];
      if (std::isfinite(w[c])) wmax = std::max(wmax, w[c]);
    }
  }
  if (!(wmax > 0.0)) return nullptr;  // flat field: fall back to the plain Laplacian
  const double lo = 1e-8 * wmax;
  for (double& wc : w) wc = std::clamp(std::isfinite(wc) ? wc : wmax, lo, wmax);
  if (level == 0 && lambda > 0.0) {
    const CellField ub = cell_average(u);
    const std::vector<double>& qb = ctx.qbar().v;
    double umax = 0.0;
    for (double x : ub.v) umax = std::max(umax, std::abs(x));
    if (umax > 0.0) {
      // Floor |ubar| to tame the blowup of |ubar|^{qbar-2} for qbar < 2.
      const double floor = 1e-6 * umax;
      std::vector<double> mass(ub.v.size());
      for (std::size_t c = 0; c < ub.v.size(); ++c)
        mass[c] = -lambda * (qb[c] - 1.0) *
                  std::pow(std::max(std::abs(ub.v[c]), floor), qb[c] - 2.0);
      try {
        return std::make_unique<Preconditioner>(ctx.grid(), w, mass);
      } catch (const numeric_error&) {
        // not positive definite here; degrade to the diffusion-only metric
      }
    }
  }
  return std::make_unique<Preconditioner>(ctx.grid(), w);
}

// Solves H d = g with the exact energy Hessian at u (diffusion block from
// phi', mass curvature from the exponent term). Throws numeric_error when the
// Hessian fails to factor, is singular, or — with require_pd — is not
// positive definite; callers treat that as "fall back to a safer metric".
// Indefinite solves are allowed for saddle refinement, where the target
// critical point is a minimizer only within its symmetry class.
ScalarField hessian_solve(const EnergyContext& ctx, const ScalarField& u,
                          double lambda, const ScalarField& g,
                          bool require_pd = true) {
  const Grid& gr = *ctx.grid();
  const YoungFunction& yf = ctx.yf();
  const std::vector<double>& qb = ctx.qbar().v;
  const double vol = gr.cell_volume();

  const long nn = gr.node_count();
  std::vector<long> dof(nn, -1);
  long nd = 0;
  for (long n = 0; n < nn; ++n)
    if (!gr.on_boundary(n)) dof[n] = nd++;
  if (nd == 0) throw numeric_error("grid has no interior nodes");

  auto phi_prime = [&](double t) {
    const double d = 1e-6 * std::max(t, 1e-6);
    const double lo = std::max(0.0, t - d);
    return std::max(0.0, (yf.phi(t + d) - yf.phi(lo)) / (t + d - lo));
  };

  const CellField ub = cell_average(u);
  double umax = 0.0;
  for (double x : ub.v) umax = std::max(umax, std::abs(x));
  auto mass_curv = [&](double ubc, double qbc) {  // d^2/du^2 of -lambda|u|^q/q
    if (!(lambda > 0.0) || umax == 0.0) return 0.0;
    double a = std::abs(ubc);
    if (qbc < 2.0) a = std::max(a, 1e-6 * umax);  // tame |u|^{q-2} near zero
    return -lambda * (qbc - 1.0) * std::pow(a, qbc - 2.0);
  };

  std::vector<Eigen::Triplet<double>> trips;
  auto add = [&](long a, long b, double val) {
    if (dof[a] >= 0 && dof[b] >= 0 && val != 0.0)
      trips.emplace_back(dof[a], dof[b], val);
  };

  if (gr.dim() == 1) {
    const double h = gr.hx();
    trips.reserve(std::size_t(gr.cell_count()) * 8);
    for (int c = 0; c < gr.nx(); ++c) {
      const double gm = std::abs((u.v[c + 1] - u.v[c]) / h);
      const double a = phi_prime(gm) * vol / (h * h);
      add(c, c, a);
      add(c + 1, c + 1, a);
      add(c, c + 1, -a);
      add(c + 1, c, -a);
      const double m = mass_curv(ub.v[c], qb[c]) * vol * 0.25;
      const long nodes[2] = {c, c + 1};
      for (long na : nodes)
        for (long nb : nodes) add(na, nb, m);
    }
  } else {
    const double hx = gr.hx(), hy = gr.hy();
    trips.reserve(std::size_t(gr.cell_count()) * 25);
    for (int j = 0; j < gr.ny(); ++j) {
      for (int i = 0; i < gr.nx(); ++i) {
        const long n00 = gr.node_index(i, j), n10 = gr.node_index(i + 1, j);
        const long n01 = gr.node_index(i, j + 1);
        const long n11 = gr.node_index(i + 1, j + 1);
        const double dx = (u.v[n10] - u.v[n00]) / hx;
        const double dy = (u.v[n01] - u.v[n00]) / hy;
        const double gm = std::sqrt(dx * dx + dy * dy);
        // 2x2 Hessian in (dx, dy): phi' along the gradient, phi/g across it.
        double axx, ayy, axy;
        if (gm > 0.0) {
          const double cpar = phi_prime(gm), cperp = yf.phi(gm) / gm;
          const double ex = dx / gm, ey = dy / gm;
          axx = cperp + (cpar - cperp) * ex * ex;
          ayy = cperp + (cpar - cperp) * ey * ey;
          axy = (cpar - cperp) * ex * ey;
        } else {
          axx = ayy = phi_prime(0.0);
          axy = 0.0;
        }
        const long nodes[3] = {n00, n10, n01};
        const double bx[3] = {-1.0 / hx, 1.0 / hx, 0.0};
        const double by[3] = {-1.0 / hy, 0.0, 1.0 / hy};
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            add(nodes[a], nodes[b],
                vol * (axx * bx[a] * bx[b] + ayy * by[a] * by[b] +
                       axy * (bx[a] * by[b] + by[a] * bx[b])));
        const long c = gr.cell_index(i, j);
        const double m = mass_curv(ub.v[c], qb[c]) * vol / 16.0;
        const long corners[4] = {n00, n10, n01, n11};
        for (long na : corners)
          for (long nb : corners) add(na, nb, m);
      }
    }
  }

  Eigen::SparseMatrix<double> H(nd, nd);
  H.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(H);
  if (ldlt.info() != Eigen::Success)
    throw numeric_error("Hessian factorization failed");
  const auto& D = ldlt.vectorD();
  double dmax = 0.0;
  for (long i = 0; i < D.size(); ++i) dmax = std::max(dmax, std::abs(D[i]));
  for (long i = 0; i < D.size(); ++i) {
    const double ok = require_pd ? D[i] : std::abs(D[i]);
    if (!(ok > 1e-14 * dmax))
      throw numeric_error(require_pd ? "Hessian is not positive definite"
                                     : "Hessian is numerically singular");
  }

  Eigen::VectorXd rhs(nd);
  for (long n = 0; n < nn; ++n)
    if (dof[n] >= 0) rhs[dof[n]] = g.v[n];
  const Eigen::VectorXd x = ldlt.solve(rhs);
  ScalarField out = ScalarField::zeros(ctx.grid());
  for (long n = 0; n < nn; ++n)
    if (dof[n] >= 0) out.v[n] = x[dof[n]];
  return out;
}

// Damped (quasi-)Newton on the stationarity system, accepting steps only when
// the sup-norm residual strictly decreases. Energy is never compared, so
// progress is not limited by ulp(J); this both polishes minimizers once line
// searches hit the double-precision floor and, with allow_indefinite, refines
// saddle-type critical points. Returns true when the tolerance is reached;
// u, J and res are left at the final iterate either way.
bool newton_polish(const EnergyContext& ctx, double lambda, double rho,
                   ScalarField& u, double& J, double& res,
                   const SolverOptions& opts, bool allow_indefinite = false) {
  const YoungFunction& yf = ctx.yf();
  const double vol = ctx.grid()->cell_volume();
  for (int pit = 0; pit < 60; ++pit) {
    const ScalarField g = energy_gradient(ctx, u, lambda);
    res = g.max_abs() / vol;
    if (res <= opts.grad_tol) {
      J = energy(ctx, u, lambda);
      return true;
    }

    auto try_direction = [&](const ScalarField& d) {
      double s = 1.0;
      for (int ls = 0; ls < 40; ++ls, s *= 0.5) {
        ScalarField trial = u;
        axpy(trial, -s, d);
        try {
          if (!(gradient_modular(yf, trial, rho) <= 1.0 + 1e-9))
            scale_in_place(trial, rho / sobolev_norm(yf, trial));
          const ScalarField gt = energy_gradient(ctx, trial, lambda);
          if (gt.max_abs() / vol < res * (1.0 - 1e-4 * s)) {
            u = std::move(trial);
            return true;
          }
        } catch (const extrapolation_error&) {  // shrink the step instead
        }
      }
      return false;
    };

    bool accepted = false;
    try {
      accepted =
          try_direction(hessian_solve(ctx, u, lambda, g, !allow_indefinite));
    } catch (const std::exception&) {  // indefinite or outside the table
    }
    if (!accepted) {  // safer first-order metric on the same residual rule
      const std::unique_ptr<Preconditioner> M = make_metric(ctx, u, lambda, 1);
      accepted = try_direction(M ? M->apply(g) : ctx.precond().apply(g));
    }
    if (!accepted) break;
  }
  J = energy(ctx, u, lambda);
  const ScalarField g = energy_gradient(ctx, u, lambda);
  res = g.max_abs() / vol;
  return res <= opts.grad_tol;
}

EigenPair make_pair(const EnergyContext& ctx, const ScalarField& u,
                    double lambda, double J, double res, double nrm) {
  EigenPair p;
  p.lambda = lambda;
  p.u = u;
  p.energy = J;
  p.residual = res;
  p.sobolev_norm = nrm;
  const CellField g = gradient_magnitude(u);
  const CellField ub = cell_average(u);
  const std::vector<double>& qb = ctx.qbar().v;
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < g.v.size(); ++c) {
    num += ctx.yf().phi(g.v[c]) * g.v[c];
    den += std::pow(std::abs(ub.v[c]), qb[c]);
  }
  p.lambda_recovered = den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
  return p;
}

}  // namespace

MinimizeResult ball_minimize(const EnergyContext& ctx, double lambda,
                             double rho, const ScalarField& start,
                             const SolverOptions& opts) {
  if (!(rho > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (start.grid != ctx.grid())
    throw std::invalid_argument("start field lives on a different grid");
  const YoungFunction& yf = ctx.yf();

  ScalarField u = start;
  u.enforce_dirichlet();
  if (!(gradient_modular(yf, u, rho) <= 1.0 + 1e-9))
    throw std::invalid_argument("start field lies outside the ball");

  MinimizeResult R;
  const double vol = ctx.grid()->cell_volume();
  double J = energy(ctx, u, lambda);
  std::unique_ptr<Preconditioner> metric;
  double step = 1.0;
  bool stationary = false;
  int frozen_streak = 0;   // consecutive accepted steps with bitwise-equal J
  int slow_streak = 0;     // iterations without a 1% residual improvement
  int polish_budget = 3;   // slow-progress polish attempts per run
  double best_res = std::numeric_limits<double>::infinity();

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const ScalarField g = energy_gradient(ctx, u, lambda);
    R.residual = g.max_abs() / vol;
    if (R.residual <= opts.grad_tol) {
      stationary = true;
      break;
    }
    if (R.residual < 0.99 * best_res) {
      best_res = R.residual;
      slow_streak = 0;
    } else if (++slow_streak >= 100 && polish_budget > 0) {
      --polish_budget;
      slow_streak = 0;
      if (newton_polish(ctx, lambda, rho, u, J, R.residual, opts)) {
        stationary = true;
        break;
      }
      metric.reset();  // the polish moved u; stale metrics would mislead
      step = 1.0;
      continue;
    }

    bool accepted = false;
    ScalarField next;
    double J_next = 0.0, s_used = 0.0;
    for (int attempt = 0; attempt < 3 && !accepted; ++attempt) {
      if (attempt > 0) {  // progressively safer metrics on failure
        metric = make_metric(ctx, u, lambda, attempt);
        step = 1.0;
      } else if (it % opts.metric_refresh == 0) {
        metric = make_metric(ctx, u, lambda, 0);
        step = 1.0;
      }
      const Preconditioner& M = metric ? *metric : ctx.precond();
      const ScalarField d = M.apply(g);
      const double gd = dot(g, d);
      if (!(gd > 0.0) || !std::isfinite(gd)) continue;

      double s = step;
      for (int ls = 0; ls < 70 && !accepted; ++ls, s *= opts.backtrack) {
        ScalarField trial = u;
        axpy(trial, -s, d);
        bool projected = false;
        double Jt;
        try {
          if (!(gradient_modular(yf, trial, rho) <= 1.0 + 1e-9)) {
            const double nrm = sobolev_norm(yf, trial);
            scale_in_place(trial, rho / nrm);
            projected = true;
          }
          Jt = energy(ctx, trial, lambda);
        } catch (const extrapolation_error&) {
          continue;  // trial left the tabulated domain; shrink the step
        }
        if (!std::isfinite(Jt)) continue;
        if (Jt <= J - opts.armijo_c * s * gd || (projected && Jt < J)) {
          accepted = true;
          next = std::move(trial);
          J_next = Jt;
          s_used = s;
        }
      }
    }
    if (!accepted) {
      if (newton_polish(ctx, lambda, rho, u, J, R.residual, opts)) {
        stationary = true;
        break;
      }
      R.status = SolveStatus::NoConvergence;
      R.iterations = it;
      R.message = "line search stalled before reaching the gradient tolerance";
      return R;
    }
    const bool frozen = (J_next == J);  // accepted, yet no representable decrease
    u = std::move(next);
    J = J_next;
    step = std::min(s_used * opts.step_grow, 1e6);

    if (u.max_abs() < 1e-4) {  // cheap trigger; exact norm decides
      const double nrm = sobolev_norm(yf, u);
      if (nrm < opts.trivial_threshold) {
        R.status = SolveStatus::Trivial;
        R.iterations = it + 1;
        R.message = "iterates collapsed onto the zero field";
        return R;
      }
    }

    frozen_streak = frozen ? frozen_streak + 1 : 0;
    if (frozen_streak >= 3) {  // energy progress is below ulp(J): switch to
      if (newton_polish(ctx, lambda, rho, u, J, R.residual, opts)) {  // residual descent
        stationary = true;
        break;
      }
      R.status = SolveStatus::NoConvergence;
      R.iterations = it + 1;
      R.message =
          "energy decrease hit the double-precision floor before the "
          "gradient tolerance";
      return R;
    }
  }

  R.iterations = it;
  if (!stationary) {
    R.status = SolveStatus::NoConvergence;
    std::ostringstream os;
    os << "iteration cap " << opts.max_iterations
       << " reached before the gradient tolerance";
    R.message = os.str();
    return R;
  }

  const double nrm = sobolev_norm(yf, u);
  if (nrm < opts.trivial_threshold) {
    R.status = SolveStatus::Trivial;
    R.message = "stationary at the zero field";
    return R;
  }
  if (!(nrm <= rho * (1.0 + 1e-9))) {
    R.status = SolveStatus::NoConvergence;
    R.message = "stationary point sits on the ball boundary";
    return R;
  }
  R.status = SolveStatus::Converged;
  R.pair = make_pair(ctx, u, lambda, J, R.residual, nrm);
  if (!std::isfinite(R.pair.lambda_recovered)) {
    R.status = SolveStatus::NoConvergence;
    R.message = "stationary field has a vanishing exponent modular";
  }
  return R;
}

CoercivityReport coercivity_probe(const EnergyContext& ctx, double lambda,
                                  const std::vector<ScalarField>& directions,
                                  const std::vector<double>& radii) {
  const double p0 = ctx.indices().p0, p0_sup = ctx.indices().p0_sup;
  const double q_minus = ctx.exponent().q_minus();
  const double q_plus = ctx.exponent().q_plus();
  if (!(q_plus < p0))
    throw regime_error("coercivity probe needs q_plus < p0");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (directions.empty() || radii.empty())
    throw std::invalid_argument("need at least one direction and one radius");

  std::vector<double> r_sorted = radii;
  std::sort(r_sorted.begin(), r_sorted.end());
  if (!(r_sorted.front() > 0.0))
    throw std::invalid_argument("radii must be positive");

  CoercivityReport rep;
  rep.all_bounds_hold = true;
  rep.all_tails_increasing = true;
  for (const ScalarField& v : directions) {
    const double nv = sobolev_norm(ctx.yf(), v);
    if (!(nv > 1e-300)) throw std::invalid_argument("zero direction supplied");
    const ScalarField vhat = scaled(v, 1.0 / nv);
    const CellField ub = cell_average(vhat);
    const double vol = ctx.grid()->cell_volume();
    RayReport ray;
    for (double x : ub.v) {
      ray.d1 += std::pow(std::abs(x), q_plus);
      ray.d2 += std::pow(std::abs(x), q_minus);
    }
    ray.d1 *= vol;
    ray.d2 *= vol;

    ray.bound_holds = true;
    for (double r : r_sorted) {
      const double J = energy(ctx, scaled(vhat, r), lambda);
      ray.energies.push_back(J);
      const double alpha = r <= 1.0 ? std::pow(r, p0_sup) : std::pow(r, p0);
      const double bound = alpha - lambda / q_minus *
                                       (ray.d1 * std::pow(r, q_plus) +
                                        ray.d2 * std::pow(r, q_minus));
      if (J < bound - 1e-8 * (1.0 + std::abs(bound))) ray.bound_holds = false;
    }
    // The largest-decade tail must climb.
    ray.tail_increasing = true;
    const double r_hi = r_sorted.back();
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r_sorted.size(); ++i) {
      if (r_sorted[i] < 0.1 * r_hi) continue;
      if (!(ray.energies[i] > prev)) ray.tail_increasing = false;
      prev = ray.energies[i];
    }
    rep.all_bounds_hold = rep.all_bounds_hold && ray.bound_holds;
    rep.all_tails_increasing = rep.all_tails_increasing && ray.tail_increasing;
    rep.rays.push_back(std::move(ray));
  }
  return rep;
}

namespace {

std::vector<ScalarField> sphere_samples(const EnergyContext& ctx,
                                        const std::vector<ScalarField>& theta) {
  const YoungFunction& yf = ctx.yf();
  const int k = int(theta.size());
  std::vector<ScalarField> unit;
  for (const ScalarField& t : theta) {
    const double n = sobolev_norm(yf, t);
    unit.push_back(scaled(t, 1.0 / n));
  }
  std::vector<ScalarField> samples = unit;     // vertices +theta_i
  samples.push_back(scaled(unit[0], -1.0));    // one negative vertex
  auto add_mix = [&](const std::vector<double>& coef) {
    if (int(samples.size()) >= 8) return;
    ScalarField w = ScalarField::zeros(ctx.grid());
    for (int i = 0; i < k; ++i) axpy(w, coef[i], unit[i]);
    const double n = sobolev_norm(yf, w);
    if (n > 1e-300) samples.push_back(scaled(w, 1.0 / n));
  };
  if (k >= 2) {
    std::vector<double> balanced(k, 1.0);
    add_mix(balanced);
    std::vector<double> alternating(k);
    for (int i = 0; i < k; ++i) alternating[i] = i % 2 == 0 ? 1.0 : -1.0;
    add_mix(alternating);
    std::vector<double> pair_diff(k, 0.0), pair_sum(k, 0.0);
    pair_diff[0] = 1.0;
    pair_diff[1] = -1.0;
    pair_sum[0] = pair_sum[1] = 1.0;
    if (k > 2) add_mix(pair_diff);  // for k == 2 equals the alternating mix
    if (k > 2) add_mix(pair_sum);
  }
  if (int(samples.size()) > 8) samples.resize(8);
  return samples;
}

bool same_pair(const EigenPair& a, const EigenPair& b) {
  const double scale = std::max(a.u.max_abs(), b.u.max_abs());
  ScalarField diff = a.u, sum = a.u;
  axpy(diff, -1.0, b.u);
  axpy(sum, 1.0, b.u);
  if (std::min(diff.max_abs(), sum.max_abs()) <= 1e-3 * scale) return true;
  // Same symmetry orbit: mirror copies share the norm and the energy level.
  return std::abs(a.sobolev_norm - b.sobolev_norm) <=
             1e-8 * std::max(1.0, a.sobolev_norm) &&
         std::abs(a.energy - b.energy) <= 1e-8 * std::max(1.0, std::abs(a.energy));
}

// Energy descent restricted to the nodal-orthogonal complement of the given
// unit directions. Higher modes are saddles of the free energy, so plain
// descent slides off them into already-found states; removing those spans
// yields a warm start that the unconstrained saddle polish can finish. Stops
// at warm-start precision, on stalls, or after a modest iteration budget.
ScalarField constrained_descent(const EnergyContext& ctx, double lambda,
                                double rho, ScalarField u,
                                const std::vector<ScalarField>& ortho,
                                const SolverOptions& opts) {
  const YoungFunction& yf = ctx.yf();
  const double vol = ctx.grid()->cell_volume();
  auto project = [&](ScalarField& w) {
    for (const ScalarField& v : ortho) {
      const double c = dot(w, v);
      if (c != 0.0) axpy(w, -c, v);
    }
  };
  project(u);
  u.enforce_dirichlet();
  double J = energy(ctx, u, lambda);
  double step = 1.0;
  int frozen = 0;
  const Preconditioner& M = ctx.precond();
  for (int it = 0; it < 2000 && frozen < 3; ++it) {
    ScalarField g = energy_gradient(ctx, u, lambda);
    project(g);
    if (g.max_abs() / vol <= 10.0 * opts.grad_tol) break;
    ScalarField d = M.apply(g);
    project(d);
    const double gd = dot(g, d);
    if (!(gd > 0.0) || !std::isfinite(gd)) break;
    bool accepted = false;
    double s = step;
    for (int ls = 0; ls < 70 && !accepted; ++ls, s *= 0.5) {
      ScalarField trial = u;
      axpy(trial, -s, d);
      project(trial);
      try {
        if (!(gradient_modular(yf, trial, rho) <= 1.0 + 1e-9)) {
          scale_in_place(trial, rho / sobolev_norm(yf, trial));
          project(trial);
        }
        const double Jt = energy(ctx, trial, lambda);
        if (std::isfinite(Jt) && Jt <= J - opts.armijo_c * s * gd) {
          frozen = (Jt == J) ? frozen + 1 : 0;
          accepted = true;
          u = std::move(trial);
          J = Jt;
          step = std::min(s * opts.step_grow, 1e6);
        }
      } catch (const extrapolation_error&) {
      }
    }
    if (!accepted) break;
  }
  return u;
}

}  // namespace

GenusResult genus_sequence_solve(const EnergyContext& ctx, double lambda,
                                 int k_max, const SolverOptions& opts) {
  const double p0 = ctx.indices().p0;
  const double q_plus = ctx.exponent().q_plus();
  if (!(q_plus < p0))
    throw regime_error("sequence construction needs q_plus < p0");
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");

  GenusResult out;
  const double genus_ball = 1e3;  // effectively unconstrained descent

  for (int k = 1; k <= k_max; ++k) {
    GenusLevel level;
    level.k = k;
    std::vector<ScalarField> theta;
    try {
      theta = build_disjoint_bumps(ctx.grid(), k);
    } catch (const capacity_error& e) {
      level.note = e.what();
      out.levels.push_back(std::move(level));
      break;  // finer k is no more feasible; truncate
    }
    level.feasible = true;

    const std::vector<ScalarField> samples = sphere_samples(ctx, theta);
    double m = std::numeric_limits<double>::infinity();
    for (const ScalarField& s : samples)
      m = std::min(m, variable_exponent_modular(s, ctx.exponent()));
    level.m = m;

    double t_k = 0.9 * std::min(0.95, std::pow(lambda * m / q_plus,
                                               1.0 / (p0 - q_plus)));
    // The index bound guarantees negativity only up to estimation slack;
    // verify directly and shrink if needed.
    for (; level.shrink_steps < 60; ++level.shrink_steps) {
      bool all_negative = true;
      for (const ScalarField& s : samples)
        if (!(energy(ctx, scaled(s, t_k), lambda) < 0.0)) all_negative = false;
      if (all_negative) break;
      t_k *= 0.5;
    }
    level.t_k = t_k;

    // Orthonormal basis (nodal inner product) of the modes found at earlier
    // levels; deflated descent below works in its orthogonal complement.
    std::vector<ScalarField> ortho;
    for (const EigenPair& p : out.pairs) {
      ScalarField v = p.u;
      for (const ScalarField& w : ortho) {
        const double c = dot(v, w);
        if (c != 0.0) axpy(v, -c, w);
      }
      const double n = std::sqrt(dot(v, v));
      if (n > 1e-12) ortho.push_back(scaled(v, 1.0 / n));
    }

    std::vector<EigenPair> found;
    int no_convergence = 0;
    for (const ScalarField& s : samples) {
      const ScalarField seed = scaled(s, t_k);
      const double J_seed = energy(ctx, seed, lambda);
      level.seed_energies.push_back(J_seed);
      if (!(J_seed < 0.0)) continue;  // could not realize a negative seed
      MinimizeResult r = ball_minimize(ctx, lambda, genus_ball, seed, opts);
      if (r.status == SolveStatus::Converged && r.pair.energy < 0.0)
        found.push_back(std::move(r.pair));
      else if (r.status == SolveStatus::NoConvergence)
        ++no_convergence;

      // Sign-mixed samples aim at higher modes, which are saddles of the
      // free energy: plain descent drifts off them into the ground state.
      // Descend in the complement of the known modes, then let indefinite
      // Newton steps finish on the genuine (unconstrained) critical point.
      double smin = 0.0, smax = 0.0;
      for (double x : s.v) {
        smin = std::min(smin, x);
        smax = std::max(smax, x);
      }
      if (k >= 2 && smin < 0.0 && smax > 0.0 && !ortho.empty()) {
        ScalarField warm =
            constrained_descent(ctx, lambda, genus_ball, seed, ortho, opts);
        double Jw = 0.0, resw = 0.0;
        if (newton_polish(ctx, lambda, genus_ball, warm, Jw, resw, opts,
                          true)) {
          const double nrm = sobolev_norm(ctx.yf(), warm);
          if (nrm > opts.trivial_threshold && Jw < 0.0) {
            EigenPair p = make_pair(ctx, warm, lambda, Jw, resw, nrm);
            if (std::isfinite(p.lambda_recovered))
              found.push_back(std::move(p));
          }
        }
      }
    }
    if (no_convergence > 0) {
      std::ostringstream os;
      os << no_convergence << " seed(s) did not converge and were omitted";
      level.note = os.str();
    }
    out.levels.push_back(std::move(level));

    for (EigenPair& p : found) {  // merge, so later levels can deflate these
      bool dup = false;
      for (const EigenPair& kept : out.pairs)
        if (same_pair(p, kept)) {
          dup = true;
          break;
        }
      if (!dup) out.pairs.push_back(std::move(p));
    }
  }

  std::stable_sort(out.pairs.begin(), out.pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) {
                     if (a.sobolev_norm != b.sobolev_norm)
                       return a.sobolev_norm > b.sobolev_norm;
                     return a.energy < b.energy;
                   });
  return out;
}

}  // namespace orlicz
