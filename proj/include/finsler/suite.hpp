#pragma once

// The acceptance battery: ten criteria, each a list of scalar checks plus
// the verification reports it produced.

#include <string>
#include <vector>

#include <json.hpp>

#include "finsler/config.hpp"
#include "finsler/report.hpp"

namespace finsler {

struct Check {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double runtime_limit = 0.0;  // seconds
  double seconds = 0.0;        // wall time, not serialised
  std::vector<Check> checks;
  std::vector<VerificationReport> reports;
  std::vector<std::string> errors;
};

/// Frozen oracle for the radial p-Laplacian eigenvalue at N = 3, p = 2.5:
/// a finite-volume discretisation on 10^4 uniform cells, solved by
/// nonlinear inverse power iteration with Newton inner solves, eigenvalue
/// read off the discrete Rayleigh quotient.
inline constexpr double kPlapFdOracle_3_2p5 = 14.111227359246831;

std::string criterion_title(int id);
double criterion_runtime_limit(int id);

/// Runs one criterion. Numerical failures are recorded, never thrown.
CriterionResult run_criterion(int id, const RunConfig& config);

/// Runs the selected criteria on `config.workers` threads; results keep the
/// order of the request.
std::vector<CriterionResult> run_suite(const RunConfig& config);

/// Deterministic for a fixed config: wall times are left out.
nlohmann::json suite_to_json(const std::vector<CriterionResult>& results,
                             const RunConfig& config);
std::string suite_to_csv(const std::vector<CriterionResult>& results);

}  // namespace finsler
