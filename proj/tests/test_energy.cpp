#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <utility>
#include <vector>

#include "orlicz/energy.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/modular.hpp"
#include "oracles.hpp"

using namespace orlicz;

namespace {

EnergyContext quadratic_ctx(int cells) {
  const GridPtr g = Grid::interval(1.0, cells);
  return EnergyContext::make(g, YoungFunction(NonlinearitySpec::pure_power(2.0)),
                             ExponentField::constant(g, 2.0));
}

EnergyContext variable_ctx(int cells) {
  const GridPtr g = Grid::interval(1.0, cells);
  return EnergyContext::make(
      g, YoungFunction(NonlinearitySpec::power_log(2.5, 1.5)),
      ExponentField::from_function(g, [](double x, double) { return 1.5 + 0.4 * x; }));
}

}  // namespace

TEST_CASE("hat function on two cells has closed-form energy and quotient") {
  const EnergyContext ctx = quadratic_ctx(2);
  ScalarField hat = ScalarField::zeros(ctx.grid());
  hat.v = {0.0, 1.0, 0.0};
  // gradient term: Phi(2) * (1/2) * 2 cells = 2; mass term: (1/2)^2/2 * 1
  for (double lambda : {0.0, 1.0, 3.0})
    CHECK(energy(ctx, hat, lambda) ==
          doctest::Approx(2.0 - 0.125 * lambda).epsilon(1e-14));
  CHECK(rayleigh_quotient(ctx, hat) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("energy is even in the field") {
  const EnergyContext ctx = variable_ctx(64);
  const ScalarField u = oracle::random_interior_field(ctx.grid(), 5);
  CHECK(energy(ctx, u, 2.0) == energy(ctx, scaled(u, -1.0), 2.0));
}

TEST_CASE("quadratic-case gradient equals the assembled stencil pair") {
  const EnergyContext ctx = quadratic_ctx(8);
  const GridPtr& g = ctx.grid();
  const double h = g->hx();
  const double lambda = 2.25;
  const ScalarField u = oracle::random_interior_field(g, 11);
  const ScalarField grad = energy_gradient(ctx, u, lambda);
  CHECK(grad.v.front() == 0.0);
  CHECK(grad.v.back() == 0.0);
  for (long j = 1; j < g->node_count() - 1; ++j) {
    const std::size_t i = std::size_t(j);
    const double stiff = (2.0 * u.v[i] - u.v[i - 1] - u.v[i + 1]) / h;
    const double ml = 0.5 * (u.v[i - 1] + u.v[i]);
    const double mr = 0.5 * (u.v[i] + u.v[i + 1]);
    const double mass = 0.5 * h * (ml + mr);
    CHECK(oracle::rel_err(grad.v[i], stiff - lambda * mass) <= 1e-13);
  }
}

TEST_CASE("gradient agrees with central differences for every family") {
  struct Case {
    NonlinearitySpec spec;
    double amp;  // sine amplitude keeping tabulated data in range
  };
  std::vector<std::pair<double, double>> knots;
  for (int i = 0; i <= 1500; ++i) {
    const double t = 60.0 * i / 1500.0;
    knots.emplace_back(t, t * std::log1p(t));
  }
  const Case cases[] = {
      {NonlinearitySpec::pure_power(2.0), 1.0},
      {NonlinearitySpec::pure_power(3.5), 1.0},
      {NonlinearitySpec::power_log(2.5, 1.5), 1.0},
      {NonlinearitySpec::power_over_log(4.0), 1.0},
      {NonlinearitySpec::tabulated(knots), 0.3},
  };
  const GridPtr g = Grid::interval(1.0, 64);
  const ExponentField q = ExponentField::from_function(
      g, [](double x, double) { return 1.5 + 0.4 * x; });
  for (const Case& c : cases) {
    const EnergyContext ctx = EnergyContext::make(g, YoungFunction(c.spec), q);
    const double lambda = 0.8;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const ScalarField u = oracle::sine_mix(g, 40 + k, 4, c.amp);
      ScalarField v = oracle::sine_mix(g, 900 + k, 4, c.amp);
      scale_in_place(v, 1.0 / v.max_abs());
      const ScalarField grad = energy_gradient(ctx, u, lambda);
      const double eps = 1e-6;
      ScalarField up = u, um = u;
      axpy(up, eps, v);
      axpy(um, -eps, v);
      const double fd =
          (energy(ctx, up, lambda) - energy(ctx, um, lambda)) / (2.0 * eps);
      const double an = dot(grad, v);
      const double rel = std::abs(fd - an) /
                         std::max({std::abs(fd), std::abs(an), 1e-10});
      worst = std::max(worst, rel);
    }
    CAPTURE(c.spec.describe());
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("gradient agrees with central differences on a box domain") {
  const GridPtr g = Grid::box(1.0, 1.0, 12, 12);
  const ExponentField q = ExponentField::from_function(
      g, [](double x, double y) { return 1.6 + 0.2 * x + 0.2 * y; });
  const EnergyContext ctx = EnergyContext::make(
      g, YoungFunction(NonlinearitySpec::power_log(2.5, 1.5)), q);
  for (int k = 0; k < 10; ++k) {
    const ScalarField u = oracle::sine_mix(g, 60 + k, 3, 0.8);
    ScalarField v = oracle::sine_mix(g, 700 + k, 3, 0.8);
    scale_in_place(v, 1.0 / v.max_abs());
    const ScalarField grad = energy_gradient(ctx, u, 1.2);
    const double eps = 1e-6;
    ScalarField up = u, um = u;
    axpy(up, eps, v);
    axpy(um, -eps, v);
    const double fd = (energy(ctx, up, 1.2) - energy(ctx, um, 1.2)) / (2.0 * eps);
    const double an = dot(grad, v);
    CHECK(std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-10}) <=
          1e-5);
  }
}

TEST_CASE("testing the weak form with the field itself collapses to cell sums") {
  const EnergyContext ctx = variable_ctx(96);
  const GridPtr& g = ctx.grid();
  const double lambda = 1.7;
  const ScalarField u = oracle::random_interior_field(g, 23, 0.5);
  const double lhs = dot(energy_gradient(ctx, u, lambda), u);
  const CellField gm = gradient_magnitude(u);
  const CellField ub = cell_average(u);
  const CellField& qb = ctx.qbar();
  const double vol = g->cell_volume();
  double rhs = 0.0;
  for (long c = 0; c < g->cell_count(); ++c) {
    const std::size_t i = std::size_t(c);
    rhs += ctx.yf().spec().phi(gm.v[i]) * gm.v[i] * vol;
    rhs -= lambda * std::pow(std::abs(ub.v[i]), qb.v[i]) * vol;
  }
  CHECK(oracle::rel_err(lhs, rhs) <= 1e-12);
}

TEST_CASE("energy splits into the quadrature of its two terms") {
  const EnergyContext ctx = variable_ctx(64);
  const GridPtr& g = ctx.grid();
  const ScalarField u = oracle::random_interior_field(g, 31, 0.7);
  const CellField gm = gradient_magnitude(u);
  const CellField ub = cell_average(u);
  const CellField& qb = ctx.qbar();
  const double vol = g->cell_volume();
  double grad_term = 0.0, mass_term = 0.0;
  for (long c = 0; c < g->cell_count(); ++c) {
    const std::size_t i = std::size_t(c);
    grad_term += ctx.yf().value(gm.v[i]) * vol;
    mass_term += std::pow(std::abs(ub.v[i]), qb.v[i]) / qb.v[i] * vol;
  }
  CHECK(oracle::rel_err(energy(ctx, u, 0.0), grad_term) <= 1e-13);
  CHECK(oracle::rel_err(energy(ctx, u, 2.5), grad_term - 2.5 * mass_term) <= 1e-12);

  // constant exponent: the mass term is the plain modular over q
  const EnergyContext c2 = quadratic_ctx(64);
  const ScalarField w = oracle::random_interior_field(c2.grid(), 37);
  const double m = variable_exponent_modular(w, c2.exponent());
  CHECK(oracle::rel_err(energy(c2, w, 3.0), energy(c2, w, 0.0) - 1.5 * m) <= 1e-13);
}

TEST_CASE("rayleigh quotient is the ratio of the two quadratures") {
  const EnergyContext ctx = variable_ctx(64);
  const ScalarField u = oracle::random_interior_field(ctx.grid(), 41, 0.6);
  const double r = rayleigh_quotient(ctx, u);
  const double num = energy(ctx, u, 0.0);
  const double den = variable_exponent_modular(u, ctx.exponent());
  CHECK(oracle::rel_err(r, num / den) <= 1e-13);
  CHECK_THROWS_AS(rayleigh_quotient(ctx, ScalarField::zeros(ctx.grid())),
                  std::domain_error);
}

TEST_CASE("quotient sweep mirrors the pointwise quotient and validates input") {
  const EnergyContext ctx = variable_ctx(64);
  const ScalarField u = oracle::sine_mix(ctx.grid(), 3, 3, 0.5);
  const std::vector<double> ts = {1.0, 0.1, 0.01};
  const auto samples = quotient_scaling_sweep(ctx, u, ts);
  REQUIRE(samples.size() == ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(samples[i].t == ts[i]);
    CHECK(oracle::rel_err(samples[i].quotient,
                          rayleigh_quotient(ctx, scaled(u, ts[i]))) <= 1e-12);
  }
  CHECK_THROWS_AS(quotient_scaling_sweep(ctx, u, {1.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(quotient_scaling_sweep(ctx, u, {-1.0}), std::invalid_argument);
}

TEST_CASE("context construction and argument checks") {
  const EnergyContext ctx = variable_ctx(32);
  // exponent averaged to cells: exact for an affine exponent
  const CellField& qb = ctx.qbar();
  for (long c = 0; c < ctx.grid()->cell_count(); ++c)
    CHECK(qb.v[std::size_t(c)] ==
          doctest::Approx(1.5 + 0.4 * ctx.grid()->cell_center(c)[0]).epsilon(1e-14));
  CHECK(ctx.indices().p0 == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(ctx.indices().p0_sup == doctest::Approx(4.0).epsilon(1e-6));

  const ScalarField u = oracle::random_interior_field(ctx.grid(), 7);
  CHECK_THROWS_AS(energy(ctx, u, -1.0), std::invalid_argument);
  const GridPtr other = Grid::interval(1.0, 16);
  CHECK_THROWS_AS(energy(ctx, ScalarField::zeros(other), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      EnergyContext::make(other,
                          YoungFunction(NonlinearitySpec::pure_power(2.0)),
                          ExponentField::constant(Grid::interval(1.0, 8), 2.0)),
      std::invalid_argument);
}
