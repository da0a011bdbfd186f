#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "orlicz/config.hpp"

namespace orlicz {

struct CommandOptions {
  double lambda = 0.0;
  std::vector<double> lambdas;
  int k_max = 3;
  std::string out_dir = ".";
  bool force = false;
};

// Hypothesis audit and regime classification; the gate in front of the solve
// commands. Regimes:
//   small_lambda_interval — eigenvalues certified below a positive threshold
//                           (needs 1 < q_minus < p0),
//   every_lambda_positive — every positive lambda admits an eigenpair
//                           (needs q_plus < p0),
//   homogeneous_case      — constant exponent matching the growth indices;
//                           the classical spectrum with a positive bottom.
struct AuditResult {
  nlohmann::ordered_json json;
  bool admissible = false;  // doubling + conjugate integrability
  bool decay_ok = false;
  bool small_lambda_interval = false;
  bool every_lambda_positive = false;
  bool homogeneous_case = false;
  std::vector<std::string> failed_hypotheses;
};

AuditResult run_audit(const ProblemConfig& cfg);

// Exit codes: 0 done, 1 runtime failure, 2 refused by the audit gate.
int cmd_audit(const ProblemConfig& cfg, const CommandOptions& opt,
              std::ostream& out);
int cmd_solve(const ProblemConfig& cfg, const CommandOptions& opt,
              std::ostream& out);
int cmd_sweep(const ProblemConfig& cfg, const CommandOptions& opt,
              std::ostream& out);
int cmd_sequence(const ProblemConfig& cfg, const CommandOptions& opt,
                 std::ostream& out);
int cmd_lambda_star(const ProblemConfig& cfg, const CommandOptions& opt,
                    std::ostream& out);

// Node-value CSV ("x,value" or "x,y,value", row-major, %.17g).
void write_field_csv(const std::string& path, const ScalarField& u);
ScalarField read_field_csv(const std::string& path, const GridPtr& grid);

}  // namespace orlicz
