#include "finsler/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace finsler {
namespace {

// JSON has no inf/nan; keep them as strings so reports stay parseable.
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string flatten(const std::map<std::string, double>& m) {
  std::string out;
  for (const auto& [k, v] : m) {
    if (!out.empty()) out += ';';
    out += k + "=" + fmt(v);
  }
  return out;
}

}  // namespace

bool inequality_pass(double deficit, double budget, bool extremal) {
  if (!(deficit >= -budget)) return false;
  return !extremal || std::abs(deficit) <= budget;
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["family"] = r.family;
  j["label"] = r.label;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : r.params) params[k] = number(v);
  j["params"] = params;
  j["norm"] = r.norm;
  j["profile"] = r.profile;
  j["lhs"] = number(r.lhs);
  j["rhs"] = number(r.rhs);
  j["ratio"] = number(r.ratio);
  j["deficit"] = number(r.deficit);
  j["relative_deficit"] = number(r.relative_deficit);
  j["error_budget"] = number(r.error_budget);
  j["extremal"] = r.extremal;
  j["pass"] = r.pass;
  j["notes"] = r.notes;
  nlohmann::json extras = nlohmann::json::object();
  for (const auto& [k, v] : r.extras) extras[k] = number(v);
  j["extras"] = extras;
  return j;
}

std::string to_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  os << "family,label,norm,profile,lhs,rhs,ratio,deficit,relative_deficit,"
        "error_budget,extremal,pass,params,extras\n";
  for (const auto& r : reports) {
    os << quote(r.family) << ',' << quote(r.label) << ',' << quote(r.norm) << ','
       << quote(r.profile) << ',' << fmt(r.lhs) << ',' << fmt(r.rhs) << ','
       << fmt(r.ratio) << ',' << fmt(r.deficit) << ',' << fmt(r.relative_deficit) << ','
       << fmt(r.error_budget) << ',' << (r.extremal ? 1 : 0) << ','
       << (r.pass ? 1 : 0) << ',' << quote(flatten(r.params)) << ','
       << quote(flatten(r.extras)) << '\n';
  }
  return os.str();
}

}  // namespace finsler
