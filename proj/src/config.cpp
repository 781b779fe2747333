#include "finsler/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "finsler/error.hpp"

namespace finsler {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorKind::input, "config " + path + ": " + what);
}

void only_keys(const json& j, const std::string& path, const std::set<std::string>& keys) {
  if (!j.is_object()) bad(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) bad(path + "." + k, "unknown key");
  }
}

double get_number(const json& j, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    bad(path, "expected a number, got \"" + s + "\"");
  }
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<int>();
}

std::uint64_t get_uint(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    bad(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

double positive(const json& j, const std::string& path) {
  const double v = get_number(j, path);
  if (!(v > 0.0) || !std::isfinite(v)) bad(path, "expected a positive finite number");
  return v;
}

}  // namespace

NormSpec quadratic_norm(std::vector<std::vector<double>> M) {
  const std::size_t n = M.size();
  require(n >= 1, ErrorKind::input, "quadratic norm: empty matrix");
  for (const auto& row : M) {
    require(row.size() == n, ErrorKind::input, "quadratic norm: matrix must be square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      require(M[i][k] == M[k][i], ErrorKind::input, "quadratic norm: matrix must be symmetric");
    }
  }
  // Positive definiteness via Cholesky.
  std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k <= i; ++k) {
      double s = M[i][k];
      for (std::size_t m = 0; m < k; ++m) s -= L[i][m] * L[k][m];
      if (i == k) {
        require(s > 0.0, ErrorKind::domain, "quadratic norm: matrix is not positive definite");
        L[i][i] = std::sqrt(s);
      } else {
        L[i][k] = s / L[k][k];
      }
    }
  }
  const std::string label = "quadratic" + json(M).dump();
  return NormSpec::generic(
      static_cast<int>(n),
      [M](std::span<const double> xi) {
        double s = 0.0;
        for (std::size_t i = 0; i < M.size(); ++i) {
          for (std::size_t k = 0; k < M.size(); ++k) s += xi[i] * M[i][k] * xi[k];
        }
        return std::sqrt(std::max(s, 0.0));
      },
      label);
}

NormSpec parse_norm(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  if (!j.contains("kind")) bad(path + ".kind", "missing");
  const std::string kind = get_string(j.at("kind"), path + ".kind");
  if (kind == "euclidean") {
    only_keys(j, path, {"kind", "dim"});
    if (!j.contains("dim")) bad(path + ".dim", "missing");
    const int dim = get_int(j.at("dim"), path + ".dim");
    if (dim < 1) bad(path + ".dim", "must be >= 1");
    return NormSpec::euclidean(dim);
  }
  if (kind == "weighted_lq") {
    only_keys(j, path, {"kind", "q", "weights", "dim"});
    if (!j.contains("q")) bad(path + ".q", "missing");
    const double q = get_number(j.at("q"), path + ".q");
    if (!(q >= 1.0)) bad(path + ".q", "must be >= 1");
    std::vector<double> w;
    if (j.contains("weights")) {
      const auto& a = j.at("weights");
      if (!a.is_array()) bad(path + ".weights", "expected an array");
      for (std::size_t i = 0; i < a.size(); ++i) {
        w.push_back(positive(a[i], path + ".weights[" + std::to_string(i) + "]"));
      }
    }
    if (j.contains("dim")) {
      const int dim = get_int(j.at("dim"), path + ".dim");
      if (dim < 1) bad(path + ".dim", "must be >= 1");
      if (w.empty()) w.assign(dim, 1.0);
      if (static_cast<int>(w.size()) != dim) {
        bad(path + ".weights", "length differs from dim");
      }
    }
    if (w.empty()) bad(path, "needs weights or dim");
    return NormSpec::weighted_lq(q, w);
  }
  if (kind == "quadratic") {
    only_keys(j, path, {"kind", "matrix", "dim"});
    if (!j.contains("matrix")) bad(path + ".matrix", "missing");
    const auto& a = j.at("matrix");
    if (!a.is_array()) bad(path + ".matrix", "expected an array of rows");
    std::vector<std::vector<double>> M;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string rp = path + ".matrix[" + std::to_string(i) + "]";
      if (!a[i].is_array()) bad(rp, "expected an array");
      std::vector<double> row;
      for (std::size_t k = 0; k < a[i].size(); ++k) {
        row.push_back(get_number(a[i][k], rp + "[" + std::to_string(k) + "]"));
      }
      M.push_back(std::move(row));
    }
    if (j.contains("dim") && get_int(j.at("dim"), path + ".dim") != static_cast<int>(M.size())) {
      bad(path + ".dim", "differs from the matrix size");
    }
    try {
      return quadratic_norm(std::move(M));
    } catch (const Error& e) {
      bad(path + ".matrix", e.what());
    }
  }
  bad(path + ".kind", "unknown norm kind '" + kind + "'");
}

json norm_to_json(const NormSpec& spec) {
  switch (spec.kind()) {
    case NormSpec::Kind::euclidean:
      return {{"kind", "euclidean"}, {"dim", spec.dim()}};
    case NormSpec::Kind::weighted_lq: {
      json q = spec.q();
      if (std::isinf(spec.q())) q = "inf";
      return {{"kind", "weighted_lq"}, {"q", q}, {"weights", spec.weights()},
              {"dim", spec.dim()}};
    }
    case NormSpec::Kind::generic:
      return {{"kind", "generic"}, {"label", spec.label()}, {"dim", spec.dim()}};
  }
  return {};
}

RunConfig parse_config(const json& j) {
  only_keys(j, "$", {"schema_version", "norm", "N", "p", "q", "R", "families", "criteria",
                     "tolerances", "seed", "mc_samples", "workers", "output"});
  RunConfig c;
  if (!j.contains("schema_version")) bad("$.schema_version", "missing");
  const int version = get_int(j.at("schema_version"), "$.schema_version");
  if (version != kConfigSchemaVersion) {
    bad("$.schema_version", "unsupported version " + std::to_string(version));
  }
  if (j.contains("norm")) {
    parse_norm(j.at("norm"), "$.norm");  // validate now
    c.norm = j.at("norm");
  }
  if (j.contains("N")) {
    c.N = get_int(j.at("N"), "$.N");
    if (c.N < 2) bad("$.N", "must be >= 2");
  }
  if (j.contains("p")) c.p = positive(j.at("p"), "$.p");
  if (j.contains("q")) c.q = positive(j.at("q"), "$.q");
  if (j.contains("R")) c.R = positive(j.at("R"), "$.R");
  if (j.contains("families")) {
    const auto& a = j.at("families");
    if (!a.is_array()) bad("$.families", "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string p = "$.families[" + std::to_string(i) + "]";
      try {
        c.families.push_back(family_from_string(get_string(a[i], p)));
      } catch (const Error& e) {
        bad(p, e.what());
      }
    }
  }
  if (j.contains("criteria")) {
    const auto& a = j.at("criteria");
    if (!a.is_array()) bad("$.criteria", "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string p = "$.criteria[" + std::to_string(i) + "]";
      const int id = get_int(a[i], p);
      if (id < 1 || id > 10) bad(p, "criterion ids are 1..10");
      c.criteria.push_back(id);
    }
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    only_keys(t, "$.tolerances",
              {"tol_1d", "tol_2d", "equivalence", "extremal", "identity", "constants"});
    auto set = [&](const char* key, double& field) {
      if (t.contains(key)) field = positive(t.at(key), std::string("$.tolerances.") + key);
    };
    set("tol_1d", c.tolerances.tol_1d);
    set("tol_2d", c.tolerances.tol_2d);
    set("equivalence", c.tolerances.equivalence);
    set("extremal", c.tolerances.extremal);
    set("identity", c.tolerances.identity);
    set("constants", c.tolerances.constants);
  }
  if (j.contains("seed")) c.seed = get_uint(j.at("seed"), "$.seed");
  if (j.contains("mc_samples")) {
    c.mc_samples = get_uint(j.at("mc_samples"), "$.mc_samples");
    if (c.mc_samples < 1000) bad("$.mc_samples", "must be >= 1000");
  }
  if (j.contains("workers")) c.workers = static_cast<unsigned>(get_uint(j.at("workers"), "$.workers"));
  if (j.contains("output")) {
    const auto& o = j.at("output");
    only_keys(o, "$.output", {"path", "format"});
    if (o.contains("path")) c.output_path = get_string(o.at("path"), "$.output.path");
    if (o.contains("format")) {
      c.format = get_string(o.at("format"), "$.output.format");
      if (c.format != "json" && c.format != "csv") {
        bad("$.output.format", "expected \"json\" or \"csv\"");
      }
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::input, "cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::input, "config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json config_to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  if (c.norm) j["norm"] = *c.norm;
  j["N"] = c.N;
  j["p"] = c.p;
  j["q"] = c.q;
  j["R"] = c.R;
  json fams = json::array();
  for (Family f : c.families) fams.push_back(to_string(f));
  j["families"] = fams;
  j["criteria"] = c.criteria;
  j["tolerances"] = {{"tol_1d", c.tolerances.tol_1d},
                     {"tol_2d", c.tolerances.tol_2d},
                     {"equivalence", c.tolerances.equivalence},
                     {"extremal", c.tolerances.extremal},
                     {"identity", c.tolerances.identity},
                     {"constants", c.tolerances.constants}};
  j["seed"] = c.seed;
  j["mc_samples"] = c.mc_samples;
  j["workers"] = c.workers;
  j["output"] = {{"path", c.output_path}, {"format", c.format}};
  return j;
}

}  // namespace finsler
