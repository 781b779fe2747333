#pragma once

// Verification reports and their JSON / CSV serialisation.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace finsler {

inline constexpr int kReportSchemaVersion = 1;

struct VerificationReport {
  std::string family;   // sobolev, gn, ..., or transplant
  std::string label;    // which identity / inequality the row checks
  std::map<std::string, double> params;
  std::string norm;
  std::string profile;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;             // rhs / lhs
  double deficit = 0.0;           // rhs - lhs, expected >= 0
  double relative_deficit = 0.0;  // deficit / |rhs|
  double error_budget = 0.0;      // absolute, same units as the deficit
  bool extremal = false;
  bool pass = false;
  std::vector<std::string> notes;
  std::map<std::string, double> extras;
};

/// pass = deficit >= -budget, and |deficit| <= budget at an extremal.
bool inequality_pass(double deficit, double budget, bool extremal);

nlohmann::json to_json(const VerificationReport& r);

/// Column header and one row per report; params and extras are flattened to
/// `key=value` lists separated by ';'.
std::string to_csv(const std::vector<VerificationReport>& reports);

}  // namespace finsler
