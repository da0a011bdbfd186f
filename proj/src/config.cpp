#include "orlicz/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "orlicz/errors.hpp"
#include "orlicz/expression.hpp"

namespace orlicz {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw config_error("config field '" + field + "': " + why);
}

double num_at(const nlohmann::json& j, const std::string& field) {
  if (!j.contains(field)) bad(field, "missing");
  if (!j[field].is_number()) bad(field, "expected a number");
  return j[field].get<double>();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ProblemConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw config_error("config root must be a JSON object");
  ProblemConfig cfg;

  if (!j.contains("domain") || !j["domain"].is_object())
    bad("domain", "missing object");
  const auto& dom = j["domain"];
  if (!dom.contains("extents") || !dom["extents"].is_array())
    bad("domain.extents", "expected an array of lengths");
  if (!dom.contains("cells") || !dom["cells"].is_array())
    bad("domain.cells", "expected an array of cell counts");
  for (const auto& e : dom["extents"]) {
    if (!e.is_number() || !(e.get<double>() > 0.0))
      bad("domain.extents", "lengths must be positive numbers");
    cfg.extents.push_back(e.get<double>());
  }
  for (const auto& c : dom["cells"]) {
    if (!c.is_number_integer() || c.get<long>() < 2)
      bad("domain.cells", "cell counts must be integers >= 2");
    cfg.cells.push_back(c.get<long>());
  }
  if (cfg.extents.size() != cfg.cells.size())
    bad("domain", "extents and cells must have the same length");
  if (cfg.extents.empty() || cfg.extents.size() > 2)
    bad("domain", "only 1-D intervals and 2-D boxes are supported");

  if (!j.contains("nonlinearity") || !j["nonlinearity"].is_object())
    bad("nonlinearity", "missing object");
  const auto& nl = j["nonlinearity"];
  if (!nl.contains("family") || !nl["family"].is_string())
    bad("nonlinearity.family", "missing string");
  const std::string family = nl["family"].get<std::string>();
  try {
    if (family == "pure_power")
      cfg.nonlinearity = NonlinearitySpec::pure_power(num_at(nl, "p"));
    else if (family == "power_log")
      cfg.nonlinearity =
          NonlinearitySpec::power_log(num_at(nl, "p"), num_at(nl, "r"));
    else if (family == "power_over_log")
      cfg.nonlinearity = NonlinearitySpec::power_over_log(num_at(nl, "p"));
    else if (family == "tabulated") {
      if (!nl.contains("knots") || !nl["knots"].is_array())
        bad("nonlinearity.knots", "expected an array of [t, phi] pairs");
      std::vector<std::pair<double, double>> knots;
      for (const auto& k : nl["knots"]) {
        if (!k.is_array() || k.size() != 2 || !k[0].is_number() ||
            !k[1].is_number())
          bad("nonlinearity.knots", "each knot must be a [t, phi] pair");
        knots.emplace_back(k[0].get<double>(), k[1].get<double>());
      }
      cfg.nonlinearity = NonlinearitySpec::tabulated(std::move(knots));
    } else
      bad("nonlinearity.family",
          "unknown family '" + family +
              "' (pure_power, power_log, power_over_log, tabulated)");
  } catch (const std::invalid_argument& e) {
    bad("nonlinearity", e.what());
  }

  if (!j.contains("exponent")) bad("exponent", "missing");
  if (j["exponent"].is_number())
    cfg.exponent_text = fmt(j["exponent"].get<double>());
  else if (j["exponent"].is_string())
    cfg.exponent_text = j["exponent"].get<std::string>();
  else
    bad("exponent", "expected a number or an expression string");
  try {
    Expression::parse(cfg.exponent_text);
  } catch (const std::invalid_argument& e) {
    bad("exponent", e.what());
  }

  if (j.contains("solver")) {
    const auto& s = j["solver"];
    if (!s.is_object()) bad("solver", "expected an object");
    for (const auto& [key, val] : s.items()) {
      if (key == "grad_tol")
        cfg.solver.grad_tol = num_at(s, key);
      else if (key == "max_iterations") {
        if (!val.is_number_integer() || val.get<long>() < 1)
          bad("solver.max_iterations", "expected a positive integer");
        cfg.solver.max_iterations = int(val.get<long>());
      } else if (key == "trivial_threshold")
        cfg.solver.trivial_threshold = num_at(s, key);
      else if (key == "armijo_c")
        cfg.solver.armijo_c = num_at(s, key);
      else if (key == "metric_refresh") {
        if (!val.is_number_integer() || val.get<long>() < 1)
          bad("solver.metric_refresh", "expected a positive integer");
        cfg.solver.metric_refresh = int(val.get<long>());
      } else if (key == "ball_radius") {
        cfg.ball_radius = num_at(s, key);
        if (cfg.ball_radius < 0.0)
          bad("solver.ball_radius", "must be >= 0 (0 selects automatically)");
      } else
        bad("solver." + key, "unknown option");
    }
  }

  if (j.contains("audit")) {
    const auto& a = j["audit"];
    if (!a.is_object()) bad("audit", "expected an object");
    for (const auto& [key, val] : a.items()) {
      if (key == "dimension") {
        if (!val.is_number_integer() || val.get<long>() < 1)
          bad("audit.dimension", "expected a positive integer");
        cfg.audit_dimension = int(val.get<long>());
      } else if (key == "decay_scales") {
        if (!val.is_array() || val.empty())
          bad("audit.decay_scales", "expected a nonempty array");
        cfg.decay_scales.clear();
        for (const auto& k : val) {
          if (!k.is_number() || !(k.get<double>() > 0.0))
            bad("audit.decay_scales", "scales must be positive numbers");
          cfg.decay_scales.push_back(k.get<double>());
        }
      } else
        bad("audit." + key, "unknown option");
    }
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0)
      bad("seed", "expected a nonnegative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }

  for (const auto& [key, val] : j.items()) {
    (void)val;
    if (key != "domain" && key != "nonlinearity" && key != "exponent" &&
        key != "solver" && key != "audit" && key != "seed")
      bad(key, "unknown top-level field");
  }
  return cfg;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(path + ": " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const config_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

EnergyContext make_context(const ProblemConfig& cfg) {
  GridPtr grid = cfg.extents.size() == 1
                     ? Grid::interval(cfg.extents[0], cfg.cells[0])
                     : Grid::box(cfg.extents[0], cfg.extents[1], cfg.cells[0],
                                 cfg.cells[1]);
  const Expression q_expr = Expression::parse(cfg.exponent_text);
  if (q_expr.uses_y() && grid->dim() == 1)
    throw config_error(
        "config field 'exponent': expression uses y on a 1-D domain");
  ExponentField q = ExponentField::from_function(
      grid, [&](double x, double y) { return q_expr.eval(x, y); });
  YoungFunction yf(cfg.nonlinearity);
  return EnergyContext::make(std::move(grid), std::move(yf), std::move(q),
                             cfg.seed ^ 0x9e3779b97f4a7c15ULL);
}

nlohmann::ordered_json canonical_json(const ProblemConfig& cfg) {
  nlohmann::ordered_json j;
  j["domain"]["extents"] = cfg.extents;
  j["domain"]["cells"] = cfg.cells;
  nlohmann::ordered_json nl;
  if (const auto* pp = std::get_if<PurePower>(&cfg.nonlinearity.family())) {
    nl["family"] = "pure_power";
    nl["p"] = pp->p;
  } else if (const auto* pl = std::get_if<PowerLog>(&cfg.nonlinearity.family())) {
    nl["family"] = "power_log";
    nl["p"] = pl->p;
    nl["r"] = pl->r;
  } else if (const auto* po =
                 std::get_if<PowerOverLog>(&cfg.nonlinearity.family())) {
    nl["family"] = "power_over_log";
    nl["p"] = po->p;
  } else {
    const auto& tb = std::get<Tabulated>(cfg.nonlinearity.family());
    nl["family"] = "tabulated";
    auto knots = nlohmann::ordered_json::array();
    for (const auto& [t, f] : tb.knots) knots.push_back({t, f});
    nl["knots"] = std::move(knots);
  }
  j["nonlinearity"] = std::move(nl);
  j["exponent"] = cfg.exponent_text;
  j["solver"]["grad_tol"] = cfg.solver.grad_tol;
  j["solver"]["max_iterations"] = cfg.solver.max_iterations;
  j["solver"]["trivial_threshold"] = cfg.solver.trivial_threshold;
  j["solver"]["armijo_c"] = cfg.solver.armijo_c;
  j["solver"]["metric_refresh"] = cfg.solver.metric_refresh;
  j["solver"]["ball_radius"] = cfg.ball_radius;
  j["audit"]["dimension"] = cfg.audit_dimension;
  j["audit"]["decay_scales"] = cfg.decay_scales;
  j["seed"] = cfg.seed;
  return j;
}

std::uint64_t config_hash(const ProblemConfig& cfg) {
  const std::string dump = canonical_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace orlicz
