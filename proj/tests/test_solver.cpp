#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "orlicz/config.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/modular.hpp"
#include "orlicz/solver.hpp"
#include "oracles.hpp"

using namespace orlicz;

namespace {

EnergyContext data_ctx(const std::string& name) {
  return make_context(load_config(std::string(ORLICZ_DATA_DIR) + "/" + name));
}

int sign_changes(const ScalarField& u) {
  const double tol = 1e-6 * u.max_abs();
  int changes = 0, prev = 0;
  for (double v : u.v) {
    if (std::abs(v) <= tol) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

}  // namespace

TEST_CASE("certified threshold has a closed form and guards its domain") {
  // rho^{p0_sup - q_minus}/2 * q_minus / c1^{q_minus}
  CHECK(lambda_star(0.25, 2.0, 2.0, 4.0) == doctest::Approx(1.0 / 64.0).epsilon(1e-14));
  CHECK(lambda_star(0.5, 1.0, 2.0, 3.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(lambda_star(0.0, 1.0, 1.5, 4.0), std::domain_error);
  CHECK_THROWS_AS(lambda_star(1.0, 1.0, 1.5, 4.0), std::domain_error);  // rho = min
  CHECK_THROWS_AS(lambda_star(0.6, 2.0, 1.5, 4.0), std::domain_error);  // rho > 1/c1
  CHECK_THROWS_AS(lambda_star(0.5, 2.0, 4.0, 4.0), std::domain_error);
  CHECK_THROWS_AS(lambda_star(0.5, -1.0, 1.5, 4.0), std::domain_error);
}

TEST_CASE("probe fields are deterministic, nonzero, and boundary-clean") {
  const EnergyContext ctx = data_ctx("small_window.json");
  const auto probes = standard_probe_fields(ctx, 40);
  CHECK(probes.size() >= 40);
  for (const ScalarField& p : probes) {
    CHECK(p.max_abs() > 0.0);
    CHECK(p.v.front() == 0.0);
    CHECK(p.v.back() == 0.0);
  }
  const auto again = standard_probe_fields(ctx, 40);
  REQUIRE(again.size() == probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i)
    CHECK(again[i].v == probes[i].v);

  // a different rng seed moves at least one seeded mixture
  ProblemConfig cfg = load_config(std::string(ORLICZ_DATA_DIR) + "/small_window.json");
  cfg.seed += 1;
  const auto moved = standard_probe_fields(make_context(cfg), 40);
  bool any_differ = false;
  for (std::size_t i = 0; i < probes.size() && !any_differ; ++i)
    any_differ = moved[i].v != probes[i].v;
  CHECK(any_differ);
}

TEST_CASE("embedding constant estimate is reproducible and sane") {
  const EnergyContext ctx = data_ctx("all_lambda.json");
  const double c1 = estimate_embedding_constant(ctx, 48);
  CHECK(c1 == doctest::Approx(0.47326329022546543).epsilon(1e-12));
  CHECK(c1 > 0.3);
  CHECK(c1 < 0.8);
  CHECK(estimate_embedding_constant(ctx, 48) == c1);
  CHECK_THROWS_AS(estimate_embedding_constant(ctx, 31), std::invalid_argument);

  // the estimate really dominates the probe ratios it was built from
  const ExponentField& q = ctx.exponent();
  for (const ScalarField& p : standard_probe_fields(ctx, 48)) {
    const double num = variable_exponent_norm(p, q);
    const double den = sobolev_norm(ctx.yf(), p);
    if (den > 0.0) CHECK(num / den <= c1 * (1.0 + 1e-9));
  }
}

TEST_CASE("ball geometry report below the certified threshold") {
  const EnergyContext ctx = data_ctx("small_window.json");
  const double c1 = estimate_embedding_constant(ctx, 48);
  const double rho = 0.9 * std::min(1.0, 1.0 / c1);
  const double ls = lambda_star(rho, c1, ctx.exponent().q_minus(),
                                ctx.indices().p0_sup);
  CHECK(ls == doctest::Approx(1.3411493205145313).epsilon(1e-10));
  REQUIRE(ls > 0.0);

  const GeometryReport rep = check_mountain_geometry(ctx, 0.5 * ls, rho);
  CHECK(rep.rho == rho);
  CHECK(rep.c1 > 0.0);
  CHECK(rep.lambda_star ==
        doctest::Approx(lambda_star(rep.rho, rep.c1, ctx.exponent().q_minus(),
                                    ctx.indices().p0_sup))
            .epsilon(1e-12));
  CHECK(rep.alpha > 0.0);  // certified positive sphere level
  CHECK(rep.sphere_inf_estimate >= rep.alpha * (1.0 - 1e-9));
  CHECK(rep.descent_direction_found);
}

TEST_CASE("negative direction seed exists in the regime and vanishes at lambda zero") {
  const EnergyContext ctx = data_ctx("small_window.json");
  const double c1 = estimate_embedding_constant(ctx, 48);
  const double rho = 0.9 * std::min(1.0, 1.0 / c1);
  const double lambda =
      0.5 * lambda_star(rho, c1, ctx.exponent().q_minus(), ctx.indices().p0_sup);

  const ScalarField seed = negative_direction_seed(ctx, lambda, rho);
  REQUIRE(seed.max_abs() > 0.0);
  CHECK(seed.v.front() == 0.0);
  CHECK(seed.v.back() == 0.0);
  CHECK(energy(ctx, seed, lambda) < 0.0);
  CHECK(sobolev_norm(ctx.yf(), seed) <= rho * (1.0 + 1e-12));

  // with no mass term every scaling has positive energy: no seed exists
  CHECK(negative_direction_seed(ctx, 0.0, rho).max_abs() == 0.0);
}

TEST_CASE("descent below the threshold produces a certified eigenpair") {
  const EnergyContext ctx = data_ctx("small_window.json");
  const double c1 = estimate_embedding_constant(ctx, 48);
  const double rho = 0.9 * std::min(1.0, 1.0 / c1);
  const double lambda =
      0.5 * lambda_star(rho, c1, ctx.exponent().q_minus(), ctx.indices().p0_sup);
  const ScalarField seed = negative_direction_seed(ctx, lambda, rho);
  const MinimizeResult res = ball_minimize(ctx, lambda, rho, seed);
  REQUIRE(res.status == SolveStatus::Converged);
  CHECK(res.pair.energy < 0.0);
  CHECK(res.pair.residual <= 1e-6);
  CHECK(std::abs(res.pair.lambda_recovered / lambda - 1.0) <= 1e-3);
  CHECK(res.pair.sobolev_norm <= rho * (1.0 + 1e-9));
  CHECK(res.pair.sobolev_norm > 1e-7);
}

TEST_CASE("homogeneous quadratic control: zero below the spectrum, mode at the bottom") {
  const EnergyContext ctx = data_ctx("homogeneous.json");
  const GridPtr& g = ctx.grid();
  ScalarField sine = ScalarField::from_function(
      g, [](double x, double) { return std::sin(M_PI * x); });
  scale_in_place(sine, 0.1 / sobolev_norm(ctx.yf(), sine));

  const MinimizeResult low = ball_minimize(ctx, 5.0, 1.0, sine);
  CHECK(low.status == SolveStatus::Trivial);

  const double l1 = oracle::discrete_principal_eigenvalue(1.0, 256);
  const MinimizeResult at = ball_minimize(ctx, l1, 1.0, sine);
  REQUIRE(at.status == SolveStatus::Converged);
  CHECK(std::abs(at.pair.lambda_recovered / l1 - 1.0) <= 1e-9);
  // the minimizer is the sine mode itself
  const double cosang = dot(at.pair.u, sine) /
                        std::sqrt(dot(at.pair.u, at.pair.u) * dot(sine, sine));
  CHECK(std::abs(cosang) >= 1.0 - 1e-9);

  // above the spectrum bottom the quadratic energy has no interior minimizer
  const MinimizeResult above = ball_minimize(ctx, 12.0, 1.0, sine);
  CHECK(above.status == SolveStatus::NoConvergence);
  CHECK_FALSE(above.message.empty());
}

TEST_CASE("descent converges at every sampled lambda in the coercive regime") {
  const EnergyContext ctx = data_ctx("all_lambda.json");
  const double rho = 1e3;  // coercive: effectively unconstrained
  for (double lambda : {1.0, 10.0}) {
    const ScalarField seed = negative_direction_seed(ctx, lambda, rho);
    REQUIRE(seed.max_abs() > 0.0);
    const MinimizeResult res = ball_minimize(ctx, lambda, rho, seed);
    REQUIRE(res.status == SolveStatus::Converged);
    CHECK(res.pair.residual <= 1e-6);
    CHECK(res.pair.energy < 0.0);
    CHECK(std::abs(res.pair.lambda_recovered / lambda - 1.0) <= 1e-6);
    CHECK(res.iterations < 5000);
  }
}

TEST_CASE("descent argument checks") {
  const EnergyContext ctx = data_ctx("all_lambda.json");
  const ScalarField zero = ScalarField::zeros(ctx.grid());
  ScalarField big = oracle::sine_mix(ctx.grid(), 1, 2, 1.0);
  scale_in_place(big, 2.0 / sobolev_norm(ctx.yf(), big));
  CHECK_THROWS_AS(ball_minimize(ctx, 1.0, 1.0, big), std::invalid_argument);
  CHECK_THROWS_AS(ball_minimize(ctx, 1.0, 0.0, zero), std::invalid_argument);
  CHECK_THROWS_AS(ball_minimize(ctx, -1.0, 1.0, zero), std::invalid_argument);
  CHECK(ball_minimize(ctx, 1.0, 1.0, zero).status == SolveStatus::Trivial);
}

TEST_CASE("coercivity probe certifies lower bounds along rays") {
  const EnergyContext ctx = data_ctx("all_lambda.json");
  std::vector<ScalarField> dirs;
  for (int i = 0; i < 3; ++i) {
    ScalarField d = oracle::sine_mix(ctx.grid(), 80 + i, 3, 1.0);
    scale_in_place(d, 1.0 / sobolev_norm(ctx.yf(), d));
    dirs.push_back(std::move(d));
  }
  const std::vector<double> radii = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  const CoercivityReport rep = coercivity_probe(ctx, 1.0, dirs, radii);
  REQUIRE(rep.rays.size() == dirs.size());
  CHECK(rep.all_bounds_hold);
  CHECK(rep.all_tails_increasing);
  for (const RayReport& r : rep.rays) {
    CHECK(r.bound_holds);
    CHECK(r.tail_increasing);
    CHECK(r.d1 > 0.0);
    CHECK(r.d2 > 0.0);
    CHECK(r.energies.size() == radii.size());
  }

  CHECK_THROWS_AS(coercivity_probe(data_ctx("homogeneous.json"), 1.0, dirs, radii),
                  regime_error);
  CHECK_THROWS_AS(coercivity_probe(ctx, 1.0, {}, radii), std::invalid_argument);
  CHECK_THROWS_AS(coercivity_probe(ctx, 1.0, dirs, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(
      coercivity_probe(ctx, 1.0, {ScalarField::zeros(ctx.grid())}, radii),
      std::invalid_argument);
}

TEST_CASE("genus-seeded sequence stacks distinct pairs with shrinking norms") {
  const EnergyContext ctx = data_ctx("all_lambda.json");
  const GenusResult res = genus_sequence_solve(ctx, 1.0, 3);
  REQUIRE(res.levels.size() == 3);
  for (const GenusLevel& l : res.levels) {
    CHECK(l.feasible);
    CHECK(l.t_k > 0.0);
    CHECK(l.m > 0.0);
    REQUIRE_FALSE(l.seed_energies.empty());
    for (double e : l.seed_energies) CHECK(e < 0.0);
  }
  REQUIRE(res.pairs.size() >= 2);
  for (std::size_t i = 0; i < res.pairs.size(); ++i) {
    const EigenPair& p = res.pairs[i];
    CHECK(p.energy < 0.0);
    CHECK(p.residual <= 1e-6);
    CHECK(std::abs(p.lambda_recovered - 1.0) <= 1e-6);
    CHECK(sign_changes(p.u) == int(i));
    if (i > 0)
      CHECK(p.sobolev_norm < res.pairs[i - 1].sobolev_norm * (1.0 - 1e-6));
  }
  // the second mode is odd about the midpoint
  CHECK(oracle::mirror_defect(res.pairs[1].u) <= 1e-8 * res.pairs[1].u.max_abs());
}

TEST_CASE("genus sequence regime and capacity handling") {
  CHECK_THROWS_AS(genus_sequence_solve(data_ctx("homogeneous.json"), 1.0, 2),
                  regime_error);
  const EnergyContext ctx = data_ctx("all_lambda.json");
  CHECK_THROWS_AS(genus_sequence_solve(ctx, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(genus_sequence_solve(ctx, 0.0, 2), std::invalid_argument);

  // a mesh too coarse for the higher levels reports the ceiling and stops
  ProblemConfig cfg = load_config(std::string(ORLICZ_DATA_DIR) + "/all_lambda.json");
  cfg.cells = {32};
  const GenusResult res = genus_sequence_solve(make_context(cfg), 1.0, 12);
  REQUIRE(res.levels.size() >= 2);
  CHECK(res.levels.size() <= 12);
  CHECK(res.levels.front().feasible);
  CHECK_FALSE(res.levels.back().feasible);
  CHECK_FALSE(res.levels.back().note.empty());
  for (std::size_t i = 0; i + 1 < res.levels.size(); ++i)
    CHECK(res.levels[i].feasible);
}
