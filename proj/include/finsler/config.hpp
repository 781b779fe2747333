#pragma once

// Run configuration: a single JSON document, parsed strictly. Unknown keys
// and type mismatches abort with the offending JSON path.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "finsler/inequalities.hpp"
#include "finsler/norms.hpp"

namespace finsler {

inline constexpr int kConfigSchemaVersion = 1;

struct SuiteTolerances {
  double tol_1d = 1e-10;       // 1-D quadrature, relative
  double tol_2d = 1e-7;        // 2-D quadrature, relative
  double equivalence = 1e-6;   // relative mismatch of transplant identities
  double extremal = 1e-5;      // relative deficit at extremals
  double identity = 1e-6;      // pointwise norm identities
  double constants = 1e-12;    // closed-form constant anchors
};

struct RunConfig {
  std::optional<nlohmann::json> norm;  // NormSpec serialisation, if given
  int N = 3;
  double p = 2.0;
  double q = 2.0;
  double R = 1.0;
  std::vector<Family> families;  // empty selects every family
  std::vector<int> criteria;     // empty selects 1..10
  SuiteTolerances tolerances;
  std::uint64_t seed = 20240917;
  std::size_t mc_samples = 1000000;
  unsigned workers = 1;
  std::string output_path = "suite_report.json";
  std::string format = "json";
};

/// `{"kind":"euclidean","dim":3}`,
/// `{"kind":"weighted_lq","q":4,"weights":[1,1,1],"dim":3}` (q may be "inf"),
/// `{"kind":"quadratic","matrix":[[...],...]}`: the generic gauge
/// sqrt(xi^T M xi) for a symmetric positive definite M.
NormSpec parse_norm(const nlohmann::json& j, const std::string& path = "$.norm");
nlohmann::json norm_to_json(const NormSpec& spec);

/// Quadratic gauge sqrt(xi^T M xi) as a generic NormSpec.
NormSpec quadratic_norm(std::vector<std::vector<double>> M);

RunConfig parse_config(const nlohmann::json& j);
/// Reads and parses a config file; a missing file is an input error.
RunConfig load_config(const std::string& path);
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace finsler
