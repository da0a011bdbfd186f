#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Eigenpair search for quasilinear problems with "
               "Orlicz-Sobolev energies and variable-exponent right-hand sides"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<long long> seed;
  orlicz::CommandOptions opt;
  double lambda = -1.0;
  std::vector<double> lambdas;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--config", config_path, "problem config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    c->add_option("--seed", seed, "override the config rng seed");
    c->add_option("--out", opt.out_dir, "artifact directory (default .)");
  };

  CLI::App* audit = app.add_subcommand("audit", "check the regime hypotheses");
  add_common(audit);

  CLI::App* solve = app.add_subcommand("solve", "one descent run at --lambda");
  add_common(solve);
  solve->add_option("--lambda", lambda, "spectral parameter")->required();
  solve->add_flag("--force", opt.force, "run even when no regime is certified");

  CLI::App* sweep = app.add_subcommand("sweep", "descent runs over --lambdas");
  add_common(sweep);
  sweep->add_option("--lambdas", lambdas, "comma separated spectral parameters")
      ->required()
      ->delimiter(',');
  sweep->add_flag("--force", opt.force, "run even when no regime is certified");

  CLI::App* sequence = app.add_subcommand(
      "sequence", "genus-seeded eigenpair sequence at --lambda");
  add_common(sequence);
  sequence->add_option("--lambda", lambda, "spectral parameter")->required();
  sequence->add_option("--k-max", opt.k_max, "largest seed dimension (default 3)");
  sequence->add_flag("--force", opt.force,
                     "run even when no regime is certified");

  CLI::App* lstar = app.add_subcommand(
      "lambda-star", "threshold below which the ball geometry certifies pairs");
  add_common(lstar);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  opt.lambda = lambda;
  opt.lambdas = lambdas;

  const auto t0 = std::chrono::steady_clock::now();
  int rc = 1;
  try {
    orlicz::ProblemConfig cfg = orlicz::load_config(config_path);
    if (seed) cfg.seed = static_cast<std::uint64_t>(*seed);
    if (audit->parsed())
      rc = orlicz::cmd_audit(cfg, opt, std::cout);
    else if (solve->parsed())
      rc = orlicz::cmd_solve(cfg, opt, std::cout);
    else if (sweep->parsed())
      rc = orlicz::cmd_sweep(cfg, opt, std::cout);
    else if (sequence->parsed())
      rc = orlicz::cmd_sequence(cfg, opt, std::cout);
    else if (lstar->parsed())
      rc = orlicz::cmd_lambda_star(cfg, opt, std::cout);
  } catch (const orlicz::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const auto t1 = std::chrono::steady_clock::now();
  std::fprintf(stderr, "wall_ms %.3f\n",
               std::chrono::duration<double, std::milli>(t1 - t0).count());
  return rc;
}
