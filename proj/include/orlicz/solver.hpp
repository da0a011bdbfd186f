#pragma once

#include <string>
#include <vector>

#include "orlicz/energy.hpp"

namespace orlicz {

struct SolverOptions {
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double step_grow = 1.5;
  int max_iterations = 50000;
  // Tolerance on max|gradient| / cell volume (a strong-form sup-norm
  // residual). Tightening much below 1e-6 runs into the double-precision
  // floor of representable energy decrease on desk-scale meshes.
  double grad_tol = 1e-6;
  double trivial_threshold = 1e-7;  // Orlicz-Sobolev norm declaring the zero outcome
  int metric_refresh = 20;          // iterations between preconditioner rebuilds
};

enum class SolveStatus { Converged, Trivial, NoConvergence };

struct EigenPair {
  double lambda = 0.0;
  ScalarField u;
  double energy = 0.0;
  double residual = 0.0;          // sup-norm energy gradient over cell volume
  double lambda_recovered = 0.0;  // weak form tested with v = u
  double sobolev_norm = 0.0;      // Luxemburg norm of |grad u|
};

struct MinimizeResult {
  SolveStatus status = SolveStatus::NoConvergence;
  EigenPair pair;  // populated when status == Converged
  int iterations = 0;
  double residual = 0.0;
  std::string message;
};

// Threshold below which the ball geometry guarantees eigenvalues:
// rho^{p0_sup - q_minus}/2 * q_minus / c1^{q_minus}. Requires
// 0 < rho < min(1, 1/c1) and q_minus < p0_sup.
double lambda_star(double rho, double c1, double q_minus, double p0_sup);

// Deterministic probe family: low sine modes, bumps, tents, and seeded
// smooth mixtures (at least n_samples fields, all Dirichlet).
std::vector<ScalarField> standard_probe_fields(const EnergyContext& ctx,
                                               int n_samples);

// Embedding constant c1 with |u|_{q(x)} <= c1 ||u||: max probe ratio times
// a 1.25 safety factor. Requires n_samples >= 32.
double estimate_embedding_constant(const EnergyContext& ctx, int n_samples);

struct GeometryReport {
  double rho = 0.0;
  double sphere_inf_estimate = 0.0;
  bool descent_direction_found = false;
  double lambda_star = 0.0;
  double alpha = 0.0;  // certified sphere level rho^{p0_sup}/2 when lambda < lambda_star
  double c1 = 0.0;
};

GeometryReport check_mountain_geometry(const EnergyContext& ctx, double lambda,
                                       double rho);

// Bump supported where q is smallest, scaled until the energy is negative
// inside the ball of radius rho; the zero field when no such scaling exists.
ScalarField negative_direction_seed(const EnergyContext& ctx, double lambda,
                                    double rho);

// Projected, preconditioned Armijo descent of J over the Orlicz-Sobolev ball
// of radius rho. Outcomes: Converged (interior stationary point, nonzero),
// Trivial (iterate collapsed onto the zero field), NoConvergence otherwise.
MinimizeResult ball_minimize(const EnergyContext& ctx, double lambda,
                             double rho, const ScalarField& start,
                             const SolverOptions& opts = {});

struct RayReport {
  double d1 = 0.0;  // measured integral |v|^{q_plus} on the unit direction
  double d2 = 0.0;  // measured integral |v|^{q_minus}
  bool bound_holds = false;
  bool tail_increasing = false;
  std::vector<double> energies;  // J at each radius
};

struct CoercivityReport {
  std::vector<RayReport> rays;
  bool all_bounds_hold = false;
  bool all_tails_increasing = false;
};

// Checks J(r v) >= alpha(r) - (d1 lambda/q_minus) r^{q_plus}
//                          - (d2 lambda/q_minus) r^{q_minus}
// with alpha(t) = t^{p0_sup} for t <= 1 and t^{p0} for t > 1, and that J
// increases along each ray over the largest radii. Requires q_plus < p0.
CoercivityReport coercivity_probe(const EnergyContext& ctx, double lambda,
                                  const std::vector<ScalarField>& directions,
                                  const std::vector<double>& radii);

struct GenusLevel {
  int k = 0;
  bool feasible = false;
  double t_k = 0.0;
  double m = 0.0;  // min of the exponent modular over the sphere samples
  int shrink_steps = 0;
  std::vector<double> seed_energies;
  std::string note;
};

struct GenusResult {
  std::vector<GenusLevel> levels;
  std::vector<EigenPair> pairs;  // deduplicated, sorted by decreasing norm
};

// For k = 1..k_max: k disjoint unit-norm bumps, sphere samples of their
// span, scale t_k making every sampled energy negative, then descent from
// each seed. Requires q_plus < p0 and k_max >= 1.
GenusResult genus_sequence_solve(const EnergyContext& ctx, double lambda,
                                 int k_max, const SolverOptions& opts = {});

}  // namespace orlicz
