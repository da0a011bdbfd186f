#include "orlicz/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "orlicz/errors.hpp"
#include "orlicz/indices.hpp"
#include "orlicz/modular.hpp"
#include "orlicz/sobolev_conjugate.hpp"
#include "orlicz/solver.hpp"

namespace fs = std::filesystem;

namespace orlicz {

namespace {

std::string f17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string f6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Trivial: return "trivial";
    case SolveStatus::NoConvergence: return "no_convergence";
  }
  return "?";
}

// Lower envelope of log Phi / log t over the largest usable decades.
double tail_growth_estimate(const YoungFunction& yf) {
  double hi = 1e6;
  if (yf.spec().is_tabulated()) hi = yf.spec().domain_max();
  const double lo = std::max(std::min(10.0, 0.5 * hi), 1e-2 * hi);
  double est = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 8; ++i) {
    const double t = lo * std::pow(hi / lo, i / 8.0);
    if (!(t > 1.0)) continue;
    est = std::min(est, std::log(yf.value(t)) / std::log(t));
  }
  return est;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

struct PairRow {
  EigenPair pair;
  std::string field_file;
};

std::string eigenpairs_csv(const std::vector<PairRow>& rows) {
  std::string s =
      "lambda,energy,residual,lambda_recovered,sobolev_norm,field_file\n";
  for (const PairRow& r : rows) {
    s += f17(r.pair.lambda) + "," + f17(r.pair.energy) + "," +
         f17(r.pair.residual) + "," + f17(r.pair.lambda_recovered) + "," +
         f17(r.pair.sobolev_norm) + "," + r.field_file + "\n";
  }
  return s;
}

nlohmann::ordered_json pair_json(const PairRow& r) {
  nlohmann::ordered_json j;
  j["lambda"] = r.pair.lambda;
  j["energy"] = r.pair.energy;
  j["residual"] = r.pair.residual;
  j["lambda_recovered"] = r.pair.lambda_recovered;
  j["sobolev_norm"] = r.pair.sobolev_norm;
  j["field_file"] = r.field_file;
  return j;
}

struct BallPlan {
  double rho = 0.0;
  double c1 = 0.0;  // 0 when the embedding constant was not needed
  std::string policy;
};

BallPlan plan_ball(const ProblemConfig& cfg, const AuditResult& audit,
                   const EnergyContext& ctx) {
  BallPlan plan;
  if (cfg.ball_radius > 0.0) {
    plan.rho = cfg.ball_radius;
    plan.policy = "config";
  } else if (audit.every_lambda_positive) {
    plan.rho = 1e3;  // coercive regime: effectively unconstrained
    plan.policy = "unconstrained";
  } else {
    plan.c1 = estimate_embedding_constant(ctx, 48);
    plan.rho = 0.9 * std::min(1.0, 1.0 / plan.c1);
    plan.policy = "embedding_ball";
  }
  return plan;
}

struct OneRun {
  MinimizeResult result;
  std::string seed_policy;
};

OneRun run_one(const EnergyContext& ctx, const BallPlan& plan, double lambda,
               const SolverOptions& opts) {
  OneRun run;
  ScalarField seed = negative_direction_seed(ctx, lambda, plan.rho);
  run.seed_policy = "negative_direction";
  if (!(seed.max_abs() > 0.0)) {
    // No descent direction below the sphere level; start from a small
    // generic profile so the zero outcome is earned, not assumed.
    run.seed_policy = "generic_probe";
    const std::vector<ScalarField> probes = standard_probe_fields(ctx, 1);
    const double n = sobolev_norm(ctx.yf(), probes.front());
    seed = scaled(probes.front(), std::min(0.5 * plan.rho, 0.1) / n);
  }
  run.result = ball_minimize(ctx, lambda, plan.rho, seed, opts);
  return run;
}

nlohmann::ordered_json run_json(double lambda, const OneRun& run,
                                const std::string& field_file) {
  nlohmann::ordered_json j;
  j["lambda"] = lambda;
  j["seed_policy"] = run.seed_policy;
  j["status"] = status_name(run.result.status);
  j["iterations"] = run.result.iterations;
  j["residual"] = run.result.residual;
  if (!run.result.message.empty()) j["message"] = run.result.message;
  if (run.result.status == SolveStatus::Converged)
    j["pair"] = pair_json({run.result.pair, field_file});
  return j;
}

int refuse(const AuditResult& audit, std::ostream& out) {
  out << "refused: no admissible regime";
  if (!audit.failed_hypotheses.empty()) {
    out << " (failed hypotheses:";
    for (const std::string& h : audit.failed_hypotheses) out << " " << h;
    out << ")";
  }
  out << "; rerun with --force to override\n";
  return 2;
}

void require_lambda(double lambda) {
  if (!std::isfinite(lambda) || !(lambda >= 0.0))
    throw config_error("this command needs --lambda <value >= 0>");
}

}  // namespace

AuditResult run_audit(const ProblemConfig& cfg) {
  const EnergyContext ctx = make_context(cfg);
  const YoungFunction& yf = ctx.yf();
  const GrowthIndices& idx = ctx.indices();
  const double qm = ctx.exponent().q_minus();
  const double qp = ctx.exponent().q_plus();
  const int N = cfg.audit_dimension;

  const Delta2Report d2 = check_delta2(yf);
  const SobolevAuditReport sc = sobolev_conjugate_audit(yf, N);
  const bool conjugate_integral =
      sc.near_zero_finite && sc.at_infinity_divergent;

  bool subcritical = false;
  std::string decay_note;
  try {
    subcritical = condition_decay_probe(yf, qp, cfg.decay_scales, N);
  } catch (const std::exception& e) {
    decay_note = e.what();
  }

  const double tail = tail_growth_estimate(yf);
  const bool growth_ok = N < idx.p0 && idx.p0 < tail;

  const bool q_minus_window = 1.0 < qm && qm < idx.p0;
  const bool q_plus_window = qp < idx.p0;

  AuditResult a;
  a.admissible = d2.pass && conjugate_integral;
  a.decay_ok = subcritical || growth_ok;
  a.small_lambda_interval = a.admissible && q_minus_window && a.decay_ok;
  a.every_lambda_positive = a.admissible && q_plus_window && a.decay_ok;
  a.homogeneous_case = qp - qm < 1e-9 &&
                       std::abs(qm - idx.p0) < 1e-6 * std::max(1.0, idx.p0) &&
                       idx.p0_sup - idx.p0 < 1e-6 * std::max(1.0, idx.p0);
  if (!d2.pass) a.failed_hypotheses.push_back("delta2_tail");
  if (!conjugate_integral) a.failed_hypotheses.push_back("conjugate_integral");
  if (!a.decay_ok)
    a.failed_hypotheses.push_back("subcritical_decay|growth_exceeds_dimension");
  if (!q_minus_window && !q_plus_window)
    a.failed_hypotheses.push_back("exponent_window");

  nlohmann::ordered_json j;
  j["dimension_audited"] = N;
  j["indices"]["p0"] = idx.p0;
  j["indices"]["p0_sup"] = idx.p0_sup;
  j["exponent"]["text"] = cfg.exponent_text;
  j["exponent"]["q_minus"] = qm;
  j["exponent"]["q_plus"] = qp;
  j["tail_growth_exponent"] = tail;
  nlohmann::ordered_json h;
  h["delta2_tail"] = {{"pass", d2.pass},
                      {"liminf", d2.liminf_est},
                      {"limsup", d2.limsup_est}};
  h["conjugate_integral"] = {{"pass", conjugate_integral},
                             {"near_zero_finite", sc.near_zero_finite},
                             {"at_infinity_divergent", sc.at_infinity_divergent}};
  h["q_minus_window"] = {{"pass", q_minus_window},
                         {"q_minus", qm},
                         {"p0", idx.p0}};
  h["q_plus_window"] = {{"pass", q_plus_window},
                        {"q_plus", qp},
                        {"p0", idx.p0}};
  nlohmann::ordered_json sd = {{"pass", subcritical},
                               {"scales", cfg.decay_scales},
                               {"dimension", N}};
  if (!decay_note.empty()) sd["note"] = decay_note;
  h["subcritical_decay"] = std::move(sd);
  h["growth_exceeds_dimension"] = {{"pass", growth_ok},
                                   {"tail_growth_exponent", tail},
                                   {"p0", idx.p0},
                                   {"dimension", N}};
  j["hypotheses"] = std::move(h);
  j["regimes"] = {{"small_lambda_interval", a.small_lambda_interval},
                  {"every_lambda_positive", a.every_lambda_positive},
                  {"homogeneous_case", a.homogeneous_case}};
  a.json = std::move(j);
  return a;
}

int cmd_audit(const ProblemConfig& cfg, const CommandOptions& opt,
              std::ostream& out) {
  AuditResult a = run_audit(cfg);
  const std::string hash = hash_hex(config_hash(cfg));
  a.json["config_hash"] = hash;

  fs::create_directories(opt.out_dir);
  const std::string path = (fs::path(opt.out_dir) / "audit.json").string();
  write_text(path, a.json.dump(2) + "\n");

  out << "audit " << hash << "\n";
  out << "indices: p0=" << f6(a.json["indices"]["p0"].get<double>())
      << " p0_sup=" << f6(a.json["indices"]["p0_sup"].get<double>()) << "\n";
  out << "exponent: q_minus=" << f6(a.json["exponent"]["q_minus"].get<double>())
      << " q_plus=" << f6(a.json["exponent"]["q_plus"].get<double>())
      << " (dimension audited: " << cfg.audit_dimension << ")\n";
  for (const auto& [name, detail] : a.json["hypotheses"].items())
    out << "hypothesis " << name << ": "
        << (detail["pass"].get<bool>() ? "pass" : "fail") << "\n";
  out << "regime small_lambda_interval: "
      << (a.small_lambda_interval ? "yes" : "no") << "\n";
  out << "regime every_lambda_positive: "
      << (a.every_lambda_positive ? "yes" : "no") << "\n";
  out << "regime homogeneous_case: " << (a.homogeneous_case ? "yes" : "no")
      << "\n";
  out << "wrote " << path << "\n";
  return 0;
}

int cmd_solve(const ProblemConfig& cfg, const CommandOptions& opt,
              std::ostream& out) {
  require_lambda(opt.lambda);
  const AuditResult audit = run_audit(cfg);
  if (!audit.small_lambda_interval && !audit.every_lambda_positive &&
      !opt.force)
    return refuse(audit, out);

  const EnergyContext ctx = make_context(cfg);
  const BallPlan plan = plan_ball(cfg, audit, ctx);
  const OneRun run = run_one(ctx, plan, opt.lambda, cfg.solver);

  fs::create_directories(opt.out_dir);
  std::vector<PairRow> rows;
  if (run.result.status == SolveStatus::Converged) {
    rows.push_back({run.result.pair, "u_0001.csv"});
    write_field_csv((fs::path(opt.out_dir) / "u_0001.csv").string(),
                    run.result.pair.u);
  }
  write_text((fs::path(opt.out_dir) / "eigenpairs.csv").string(),
             eigenpairs_csv(rows));

  const std::string hash = hash_hex(config_hash(cfg));
  nlohmann::ordered_json rec;
  rec["command"] = "solve";
  rec["config_hash"] = hash;
  rec["indices"] = audit.json["indices"];
  rec["regimes"] = audit.json["regimes"];
  rec["rho"] = plan.rho;
  rec["rho_policy"] = plan.policy;
  if (plan.c1 > 0.0) rec["c1"] = plan.c1;
  rec["runs"] = nlohmann::ordered_json::array(
      {run_json(opt.lambda, run,
                rows.empty() ? std::string() : rows.front().field_file)});
  write_text((fs::path(opt.out_dir) / "record.json").string(),
             rec.dump(2) + "\n");

  out << "solve " << hash << " lambda=" << f17(opt.lambda)
      << " rho=" << f6(plan.rho) << " (" << plan.policy;
  if (plan.c1 > 0.0) out << ", c1=" << f6(plan.c1);
  out << ")\n";
  out << "seed: " << run.seed_policy << "\n";
  out << "status: " << status_name(run.result.status)
      << " iterations=" << run.result.iterations
      << " residual=" << f6(run.result.residual) << "\n";
  if (run.result.status == SolveStatus::Converged)
    out << "pair: energy=" << f17(run.result.pair.energy)
        << " lambda_recovered=" << f17(run.result.pair.lambda_recovered)
        << " sobolev_norm=" << f17(run.result.pair.sobolev_norm)
        << " field=u_0001.csv\n";
  else if (!run.result.message.empty())
    out << "note: " << run.result.message << "\n";
  out << "wrote " << (fs::path(opt.out_dir) / "eigenpairs.csv").string() << "\n";
  return 0;
}

int cmd_sweep(const ProblemConfig& cfg, const CommandOptions& opt,
              std::ostream& out) {
  if (opt.lambdas.empty())
    throw config_error("sweep needs --lambdas <v1,v2,...>");
  for (double l : opt.lambdas) require_lambda(l);
  const AuditResult audit = run_audit(cfg);
  if (!audit.small_lambda_interval && !audit.every_lambda_positive &&
      !opt.force)
    return refuse(audit, out);

  const EnergyContext ctx = make_context(cfg);
  const BallPlan plan = plan_ball(cfg, audit, ctx);
  const std::string hash = hash_hex(config_hash(cfg));

  fs::create_directories(opt.out_dir);
  std::vector<PairRow> rows;
  auto runs = nlohmann::ordered_json::array();
  out << "sweep " << hash << " rho=" << f6(plan.rho) << " (" << plan.policy
      << ")\n";
  for (double lambda : opt.lambdas) {
    const OneRun run = run_one(ctx, plan, lambda, cfg.solver);
    std::string field_file;
    if (run.result.status == SolveStatus::Converged) {
      char name[32];
      std::snprintf(name, sizeof name, "u_%04zu.csv", rows.size() + 1);
      field_file = name;
      rows.push_back({run.result.pair, field_file});
      write_field_csv((fs::path(opt.out_dir) / field_file).string(),
                      run.result.pair.u);
    }
    runs.push_back(run_json(lambda, run, field_file));
    out << "lambda=" << f17(lambda) << " status="
        << status_name(run.result.status)
        << " iterations=" << run.result.iterations;
    if (run.result.status == SolveStatus::Converged)
      out << " energy=" << f17(run.result.pair.energy)
          << " lambda_recovered=" << f17(run.result.pair.lambda_recovered);
    out << "\n";
  }
  write_text((fs::path(opt.out_dir) / "eigenpairs.csv").string(),
             eigenpairs_csv(rows));
  nlohmann::ordered_json rec;
  rec["command"] = "sweep";
  rec["config_hash"] = hash;
  rec["indices"] = audit.json["indices"];
  rec["regimes"] = audit.json["regimes"];
  rec["rho"] = plan.rho;
  rec["rho_policy"] = plan.policy;
  if (plan.c1 > 0.0) rec["c1"] = plan.c1;
  rec["runs"] = std::move(runs);
  write_text((fs::path(opt.out_dir) / "record.json").string(),
             rec.dump(2) + "\n");
  out << "wrote " << (fs::path(opt.out_dir) / "eigenpairs.csv").string() << "\n";
  return 0;
}

int cmd_sequence(const ProblemConfig& cfg, const CommandOptions& opt,
                 std::ostream& out) {
  require_lambda(opt.lambda);
  if (opt.k_max < 1) throw config_error("sequence needs --k-max >= 1");
  const AuditResult audit = run_audit(cfg);
  if (!audit.every_lambda_positive && !opt.force) return refuse(audit, out);

  const EnergyContext ctx = make_context(cfg);
  const GenusResult res =
      genus_sequence_solve(ctx, opt.lambda, opt.k_max, cfg.solver);
  const std::string hash = hash_hex(config_hash(cfg));

  fs::create_directories(opt.out_dir);
  std::vector<PairRow> rows;
  for (const EigenPair& p : res.pairs) {
    char name[32];
    std::snprintf(name, sizeof name, "u_%04zu.csv", rows.size() + 1);
    rows.push_back({p, name});
    write_field_csv((fs::path(opt.out_dir) / name).string(), p.u);
  }
  write_text((fs::path(opt.out_dir) / "eigenpairs.csv").string(),
             eigenpairs_csv(rows));

  nlohmann::ordered_json rec;
  rec["command"] = "sequence";
  rec["config_hash"] = hash;
  rec["lambda"] = opt.lambda;
  rec["k_max"] = opt.k_max;
  auto levels = nlohmann::ordered_json::array();
  for (const GenusLevel& l : res.levels) {
    nlohmann::ordered_json jl;
    jl["k"] = l.k;
    jl["feasible"] = l.feasible;
    jl["t_k"] = l.t_k;
    jl["m"] = l.m;
    jl["shrink_steps"] = l.shrink_steps;
    jl["seed_energies"] = l.seed_energies;
    if (!l.note.empty()) jl["note"] = l.note;
    levels.push_back(std::move(jl));
  }
  rec["levels"] = std::move(levels);
  auto pairs = nlohmann::ordered_json::array();
  for (const PairRow& r : rows) pairs.push_back(pair_json(r));
  rec["pairs"] = std::move(pairs);
  write_text((fs::path(opt.out_dir) / "record.json").string(),
             rec.dump(2) + "\n");

  out << "sequence " << hash << " lambda=" << f17(opt.lambda)
      << " k_max=" << opt.k_max << "\n";
  for (const GenusLevel& l : res.levels) {
    out << "level k=" << l.k << (l.feasible ? "" : " infeasible");
    if (l.feasible)
      out << " t_k=" << f6(l.t_k) << " m=" << f6(l.m)
          << " shrink_steps=" << l.shrink_steps;
    if (!l.note.empty()) out << " note: " << l.note;
    out << "\n";
  }
  out << "pairs: " << rows.size() << "\n";
  for (const PairRow& r : rows)
    out << "pair: sobolev_norm=" << f17(r.pair.sobolev_norm)
        << " energy=" << f17(r.pair.energy) << " field=" << r.field_file
        << "\n";
  out << "wrote " << (fs::path(opt.out_dir) / "eigenpairs.csv").string() << "\n";
  return 0;
}

int cmd_lambda_star(const ProblemConfig& cfg, const CommandOptions& opt,
                    std::ostream& out) {
  const EnergyContext ctx = make_context(cfg);
  const double c1 = estimate_embedding_constant(ctx, 48);
  const double rho =
      cfg.ball_radius > 0.0 ? cfg.ball_radius : 0.9 * std::min(1.0, 1.0 / c1);
  const double q_minus = ctx.exponent().q_minus();
  const double p0_sup = ctx.indices().p0_sup;
  const double ls = lambda_star(rho, c1, q_minus, p0_sup);
  const std::string hash = hash_hex(config_hash(cfg));

  fs::create_directories(opt.out_dir);
  nlohmann::ordered_json rec;
  rec["command"] = "lambda_star";
  rec["config_hash"] = hash;
  rec["c1"] = c1;
  rec["rho"] = rho;
  rec["q_minus"] = q_minus;
  rec["p0_sup"] = p0_sup;
  rec["lambda_star"] = ls;
  write_text((fs::path(opt.out_dir) / "record.json").string(),
             rec.dump(2) + "\n");

  out << "lambda_star " << hash << "\n";
  out << "c1=" << f17(c1) << " rho=" << f17(rho) << " q_minus=" << f17(q_minus)
      << " p0_sup=" << f17(p0_sup) << "\n";
  out << "lambda_star=" << f17(ls) << "\n";
  out << "wrote " << (fs::path(opt.out_dir) / "record.json").string() << "\n";
  return 0;
}

void write_field_csv(const std::string& path, const ScalarField& u) {
  const GridPtr& g = u.grid;
  std::string s = g->dim() == 1 ? "x,value\n" : "x,y,value\n";
  for (long n = 0; n < g->node_count(); ++n) {
    const auto [x, y] = g->node_coord(n);
    s += f17(x);
    if (g->dim() == 2) s += "," + f17(y);
    s += "," + f17(u.v[std::size_t(n)]) + "\n";
  }
  write_text(path, s);
}

ScalarField read_field_csv(const std::string& path, const GridPtr& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  ScalarField u = ScalarField::zeros(grid);
  long n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t comma = line.find_last_of(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path + ": malformed row");
    if (n >= grid->node_count())
      throw std::runtime_error(path + ": more rows than grid nodes");
    u.v[std::size_t(n)] = std::stod(line.substr(comma + 1));
    ++n;
  }
  if (n != grid->node_count())
    throw std::runtime_error(path + ": row count does not match the grid");
  return u;
}

}  // namespace orlicz
