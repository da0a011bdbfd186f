// Acceptance harness: one line per criterion, [PASS]/[FAIL] with the measured
// quantities, exit code = number of failures. Library-level checks mirror the
// CLI plans; the determinism criterion drives the installed binary itself.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "orlicz/config.hpp"
#include "orlicz/energy.hpp"
#include "orlicz/indices.hpp"
#include "orlicz/modular.hpp"
#include "orlicz/run.hpp"
#include "orlicz/solver.hpp"
#include "oracles.hpp"

using namespace orlicz;

namespace {

int failures = 0;

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

void report(int num, const char* name, bool ok, const std::string& detail,
            double ms) {
  std::printf("[%s] criterion %d (%s): %s [%.0f ms]\n", ok ? "PASS" : "FAIL",
              num, name, detail.c_str(), ms);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

EnergyContext data_ctx(const char* name) {
  return make_context(load_config(std::string(ORLICZ_DATA_DIR) + "/" + name));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// ---- 1: growth index recovery ----------------------------------------------

void criterion_indices() {
  Timer t;
  double dev = 0.0;
  auto check = [&](NonlinearitySpec s, double lo, double hi, double tol) {
    const GrowthIndices g = estimate_indices(YoungFunction(s));
    dev = std::max({dev, std::abs(g.p0 - lo), std::abs(g.p0_sup - hi)});
    return std::abs(g.p0 - lo) <= tol && std::abs(g.p0_sup - hi) <= tol;
  };
  bool ok = check(NonlinearitySpec::power_log(2.5, 1.5), 2.5, 4.0, 1e-2);
  ok = check(NonlinearitySpec::power_over_log(4.0), 3.0, 4.0, 1e-2) && ok;
  for (double p : {1.7, 2.0, 3.5})
    ok = check(NonlinearitySpec::pure_power(p), p, p, 1e-9) && ok;
  const double ms = t.ms();
  ok = ok && ms < 1000.0;
  report(1, "growth index recovery", ok, "max deviation " + fmt(dev), ms);
}

// ---- 2: product inequality and norm calculus -------------------------------

void criterion_norm_calculus() {
  Timer t;
  bool ok = true;
  std::string detail;

  // product inequality, ten thousand log-uniform pairs per family
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> expo(-3.0, 3.0);
  int violations = 0;
  double worst = 0.0;
  for (auto spec : {NonlinearitySpec::power_log(2.5, 1.5),
                    NonlinearitySpec::power_over_log(4.0),
                    NonlinearitySpec::pure_power(2.7)}) {
    const YoungFunction yf(spec);
    for (int i = 0; i < 10000; ++i) {
      const double s = std::pow(10.0, expo(eng));
      const double x = std::pow(10.0, expo(eng));
      const double rel =
          (s * x - yf.value(s) - yf.conjugate(x)) / std::max(1.0, s * x);
      worst = std::max(worst, rel);
      if (rel > 1e-9) ++violations;
    }
  }
  ok = ok && violations == 0;
  detail += "violations " + std::to_string(violations) + " (worst rel gap " +
            fmt(worst) + ")";

  // gradient-norm homogeneity and the unit modular at the norm
  const GridPtr g = Grid::interval(1.0, 64);
  const YoungFunction yf(NonlinearitySpec::power_log(2.5, 1.5));
  double h_dev = 0.0, m_dev = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ScalarField u = oracle::random_interior_field(g, 500 + seed);
    const double n = sobolev_norm(yf, u);
    h_dev = std::max(h_dev,
                     std::abs(sobolev_norm(yf, scaled(u, -3.0)) / (3.0 * n) - 1.0));
    m_dev = std::max(m_dev, std::abs(gradient_modular(yf, u, n) - 1.0));
  }
  ok = ok && h_dev <= 1e-8 && m_dev <= 1e-8;
  detail += ", homogeneity dev " + fmt(h_dev) + ", modular dev " + fmt(m_dev);

  // modular bracketed by powers of the norm, one hundred random fields
  const ExponentField q = ExponentField::from_function(
      g, [](double x, double) { return 1.5 + 0.4 * x; });
  int sandwich_bad = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ScalarField u = oracle::random_interior_field(g, 900 + seed);
    const double n = variable_exponent_norm(u, q);
    const double rho = variable_exponent_modular(u, q);
    const double a = std::pow(n, q.q_minus());
    const double b = std::pow(n, q.q_plus());
    if (!(rho >= std::min(a, b) * (1.0 - 1e-8) &&
          rho <= std::max(a, b) * (1.0 + 1e-8)))
      ++sandwich_bad;
  }
  ok = ok && sandwich_bad == 0;
  detail += ", bracket failures " + std::to_string(sandwich_bad);

  const double ms = t.ms();
  ok = ok && ms < 5000.0;
  report(2, "product inequality and norm calculus", ok, detail, ms);
}

// ---- 3: gradient against central differences -------------------------------

void criterion_gradient() {
  Timer t;
  std::vector<std::pair<double, double>> knots;
  for (int i = 0; i <= 1500; ++i) {
    const double x = 60.0 * i / 1500.0;
    knots.emplace_back(x, x * std::log1p(x));
  }
  struct Case {
    NonlinearitySpec spec;
    double amp;
  };
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
  double worst = 0.0;
  for (const Case& c : cases) {
    const EnergyContext ctx = EnergyContext::make(g, YoungFunction(c.spec), q);
    for (int k = 0; k < 20; ++k) {
      const ScalarField u = oracle::sine_mix(g, 40 + k, 4, c.amp);
      ScalarField v = oracle::sine_mix(g, 900 + k, 4, c.amp);
      scale_in_place(v, 1.0 / v.max_abs());
      const double eps = 1e-6;
      ScalarField up = u, um = u;
      axpy(up, eps, v);
      axpy(um, -eps, v);
      const double fd =
          (energy(ctx, up, 0.8) - energy(ctx, um, 0.8)) / (2.0 * eps);
      const double an = dot(energy_gradient(ctx, u, 0.8), v);
      worst = std::max(worst, std::abs(fd - an) /
                                  std::max({std::abs(fd), std::abs(an), 1e-10}));
    }
  }
  const double ms = t.ms();
  const bool ok = worst <= 1e-5 && ms < 10000.0;
  report(3, "gradient vs central differences", ok,
         "worst relative mismatch " + fmt(worst) + " over 100 pairs", ms);
}

// ---- 4: certified small-parameter run --------------------------------------

void criterion_small_window() {
  Timer t;
  const EnergyContext ctx = data_ctx("small_window.json");
  const double c1 = estimate_embedding_constant(ctx, 48);
  const double rho = 0.9 * std::min(1.0, 1.0 / c1);
  const double ls = lambda_star(rho, c1, ctx.exponent().q_minus(),
                                ctx.indices().p0_sup);
  const double lambda = 0.5 * ls;
  const ScalarField seed = negative_direction_seed(ctx, lambda, rho);
  const MinimizeResult res = ball_minimize(ctx, lambda, rho, seed);
  const double rec_dev =
      res.status == SolveStatus::Converged
          ? std::abs(res.pair.lambda_recovered / lambda - 1.0)
          : 1.0;
  const double ms = t.ms();
  const bool ok = ls > 0.0 && res.status == SolveStatus::Converged &&
                  res.pair.energy < 0.0 && res.pair.residual <= 1e-6 &&
                  rec_dev <= 1e-3 && ms < 60000.0;
  report(4, "certified small-parameter eigenpair", ok,
         "threshold " + fmt(ls) + ", energy " + fmt(res.pair.energy) +
             ", residual " + fmt(res.pair.residual) + ", recovery dev " +
             fmt(rec_dev),
         ms);
}

// ---- 5: homogeneous quadratic control --------------------------------------

void criterion_homogeneous() {
  Timer t;
  const EnergyContext ctx = data_ctx("homogeneous.json");
  ScalarField sine = ScalarField::from_function(
      ctx.grid(), [](double x, double) { return std::sin(M_PI * x); });
  scale_in_place(sine, 0.1 / sobolev_norm(ctx.yf(), sine));

  bool ok = true;
  for (double lambda : {5.0, 8.0})
    ok = ball_minimize(ctx, lambda, 1.0, sine).status == SolveStatus::Trivial &&
         ok;

  const double l1 = oracle::discrete_principal_eigenvalue(1.0, 256);
  // the stencil eigenvalue sits well inside 2% of the continuum pi^2
  ok = ok && std::abs(l1 / (M_PI * M_PI) - 1.0) <= 0.02;
  const MinimizeResult at = ball_minimize(ctx, l1, 1.0, sine);
  const double rec_dev = at.status == SolveStatus::Converged
                             ? std::abs(at.pair.lambda_recovered / l1 - 1.0)
                             : 1.0;
  ok = ok && at.status == SolveStatus::Converged && rec_dev <= 1e-3;
  report(5, "homogeneous quadratic control", ok,
         "zero outcome below the spectrum, mode at " + fmt(l1) +
             " with recovery dev " + fmt(rec_dev),
         t.ms());
}

// ---- 6: full sweep in the coercive regime -----------------------------------

void criterion_sweep() {
  Timer t;
  const EnergyContext ctx = data_ctx("all_lambda.json");
  const double rho = 1e3;
  bool ok = true;
  double worst_res = 0.0;
  for (double lambda : {0.5, 1.0, 5.0, 10.0}) {
    const ScalarField seed = negative_direction_seed(ctx, lambda, rho);
    const MinimizeResult res = ball_minimize(ctx, lambda, rho, seed);
    worst_res = std::max(worst_res, res.residual);
    ok = ok && res.status == SolveStatus::Converged && res.residual <= 1e-6;
  }
  const double ms = t.ms();
  ok = ok && ms < 120000.0;
  report(6, "every sampled parameter admits a pair", ok,
         "4/4 converged, worst residual " + fmt(worst_res), ms);
}

// ---- 7: genus-seeded sequence -----------------------------------------------

void criterion_sequence() {
  Timer t;
  const EnergyContext ctx = data_ctx("all_lambda.json");
  const GenusResult res = genus_sequence_solve(ctx, 1.0, 3);
  bool ok = res.pairs.size() >= 2;
  bool seeds_negative = true;
  for (const GenusLevel& l : res.levels)
    for (double e : l.seed_energies) seeds_negative = seeds_negative && e < 0.0;
  ok = ok && seeds_negative;
  std::string norms;
  for (std::size_t i = 0; i < res.pairs.size(); ++i) {
    ok = ok && res.pairs[i].energy < 0.0;
    if (i > 0)
      ok = ok && res.pairs[i].sobolev_norm <
                     res.pairs[i - 1].sobolev_norm * (1.0 - 1e-9);
    norms += (i ? " > " : "") + fmt(res.pairs[i].sobolev_norm);
  }
  report(7, "nested-seed eigenpair sequence", ok,
         std::to_string(res.pairs.size()) + " pairs, norms " + norms +
             (seeds_negative ? ", all seeds negative" : ", seed energy >= 0"),
         t.ms());
}

// ---- 8: quotient decay under scaling ----------------------------------------

void criterion_quotient() {
  Timer t;
  const EnergyContext ctx = data_ctx("small_window.json");
  const double c1 = estimate_embedding_constant(ctx, 48);
  const double rho = 0.9 * std::min(1.0, 1.0 / c1);
  const double ls = lambda_star(rho, c1, ctx.exponent().q_minus(),
                                ctx.indices().p0_sup);
  const ScalarField u = negative_direction_seed(ctx, 0.5 * ls, rho);
  const std::vector<double> ts = {1e-1, 1e-2, 1e-3, 1e-4};
  const auto sweep = quotient_scaling_sweep(ctx, u, ts);
  bool decreasing = true;
  for (std::size_t i = 1; i < sweep.size(); ++i)
    decreasing = decreasing && sweep[i].quotient < sweep[i - 1].quotient;
  const double ratio = sweep.back().quotient / sweep.front().quotient;
  const bool ok = decreasing && ratio <= 1e-2;
  report(8, "quotient decays along vanishing scalings", ok,
         std::string(decreasing ? "strictly decreasing" : "not monotone") +
             ", end-to-end ratio " + fmt(ratio),
         t.ms());
}

// ---- 9: byte-identical reruns ------------------------------------------------

void criterion_determinism() {
  Timer t;
  char tmpl[] = "/tmp/orlicz_accept_XXXXXX";
  const char* dir_c = mkdtemp(tmpl);
  if (!dir_c) {
    report(9, "byte-identical reruns", false, "mkdtemp failed", t.ms());
    return;
  }
  const std::string dir = dir_c;
  const std::string cmd = std::string(ORLICZ_SPECTRA_BIN) + " sweep --config " +
                          ORLICZ_DATA_DIR + "/all_lambda.json --lambdas 0.5,1" +
                          " --out " + dir + " >" + dir + "/run_stdout.txt 2>/dev/null";

  auto run_once = [&]() -> std::vector<std::string> {
    if (std::system(cmd.c_str()) != 0) return {};
    return {slurp(dir + "/run_stdout.txt"), slurp(dir + "/eigenpairs.csv"),
            slurp(dir + "/record.json"), slurp(dir + "/u_0001.csv"),
            slurp(dir + "/u_0002.csv")};
  };
  const std::vector<std::string> first = run_once();
  const std::vector<std::string> second = run_once();
  const bool ran = !first.empty() && !second.empty();
  bool identical = ran;
  for (std::size_t i = 0; ran && i < first.size(); ++i)
    identical = identical && first[i] == second[i];
  report(9, "byte-identical reruns", identical,
         ran ? (identical ? "stdout and all artifacts match bitwise"
                          : "outputs differ between reruns")
             : "sweep command failed",
         t.ms());
}

}  // namespace

int main() {
  criterion_indices();
  criterion_norm_calculus();
  criterion_gradient();
  criterion_small_window();
  criterion_homogeneous();
  criterion_sweep();
  criterion_sequence();
  criterion_quotient();
  criterion_determinism();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
