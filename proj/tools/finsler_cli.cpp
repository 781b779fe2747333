// finsler: constants, single-case verification, the acceptance suite and
// plot data. Exit codes: 0 pass, 1 verification failure, 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "finsler/config.hpp"
#include "finsler/error.hpp"
#include "finsler/inequalities.hpp"
#include "finsler/suite.hpp"
#include "finsler/transplant.hpp"

using namespace finsler;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct CaseArgs {
  std::string family;
  int N = 3;
  double p = 2.0;
  std::optional<double> q;
  double R = 1.0;
  std::string norm = "euclidean";
  double norm_q = 2.0;
  std::vector<double> weights;
  std::string matrix;
  std::string extremal;
  std::string profile;
  double k = 5.0;
  double tol_1d = 1e-10;
  double tol_2d = 1e-7;
  std::string format = "json";
  std::string out;
  std::string map;
};

void add_case_options(CLI::App* cmd, CaseArgs& a) {
  cmd->add_option("--N", a.N, "ambient dimension");
  cmd->add_option("--p", a.p, "exponent p");
  cmd->add_option("--q", a.q, "Gagliardo-Nirenberg exponent q");
  cmd->add_option("--R", a.R, "radius of the Wulff ball");
  cmd->add_option("--norm", a.norm,
                  "euclidean | weighted_lq | quadratic | a JSON norm object");
  cmd->add_option("--norm-q", a.norm_q, "exponent of a weighted_lq norm");
  cmd->add_option("--weights", a.weights, "weights of a weighted_lq norm")->delimiter(',');
  cmd->add_option("--matrix", a.matrix, "JSON matrix of a quadratic norm");
}

NormSpec build_norm(const CaseArgs& a, int dim) {
  if (!a.norm.empty() && a.norm.front() == '{') {
    json j;
    try {
      j = json::parse(a.norm);
    } catch (const json::parse_error& e) {
      fail(ErrorKind::input, std::string("--norm is not valid JSON: ") + e.what());
    }
    const NormSpec spec = parse_norm(j, "--norm");
    require(spec.dim() == dim, ErrorKind::input,
            "--norm has dimension " + std::to_string(spec.dim()) + ", expected " +
                std::to_string(dim));
    return spec;
  }
  if (a.norm == "euclidean") return NormSpec::euclidean(dim);
  if (a.norm == "weighted_lq") {
    std::vector<double> w = a.weights;
    if (w.empty()) w.assign(dim, 1.0);
    require(static_cast<int>(w.size()) == dim, ErrorKind::input,
            "--weights needs " + std::to_string(dim) + " entries");
    return NormSpec::weighted_lq(a.norm_q, w);
  }
  if (a.norm == "quadratic") {
    require(!a.matrix.empty(), ErrorKind::input, "--norm quadratic needs --matrix");
    json j;
    try {
      j = json::parse(a.matrix);
    } catch (const json::parse_error& e) {
      fail(ErrorKind::input, std::string("--matrix is not valid JSON: ") + e.what());
    }
    const NormSpec spec = parse_norm(json{{"kind", "quadratic"}, {"matrix", j}}, "--matrix");
    require(spec.dim() == dim, ErrorKind::input, "--matrix has the wrong dimension");
    return spec;
  }
  fail(ErrorKind::input, "unknown norm '" + a.norm + "'");
}

ExtremalSpec parse_extremal(const std::string& text, double& k) {
  ExtremalSpec e;
  const std::map<std::string, double*> fields = {
      {"a", &e.a},     {"b", &e.b},           {"sigma", &e.sigma}, {"C", &e.C},
      {"lambda", &e.lambda}, {"eps", &e.eps}, {"k", &k}};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    require(eq != std::string::npos, ErrorKind::input,
            "--extremal expects key=value pairs, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    auto it = fields.find(key);
    require(it != fields.end(), ErrorKind::input, "--extremal: unknown parameter '" + key + "'");
    try {
      std::size_t used = 0;
      *it->second = std::stod(item.substr(eq + 1), &used);
      require(used == item.size() - eq - 1, ErrorKind::input, "trailing characters");
    } catch (const std::logic_error&) {
      fail(ErrorKind::input, "--extremal: '" + item + "' is not a number");
    }
  }
  return e;
}

double family_exponent(Family f, const CaseArgs& a) {
  if (f == Family::gn) {
    require(a.q.has_value(), ErrorKind::input, "gn needs --q");
    return *a.q;
  }
  return a.p;
}

json constants_json(const SharpConstants& c) {
  json j;
  j["family"] = to_string(c.family);
  j["label"] = family_label(c.family);
  j["N"] = c.N;
  j[c.family == Family::gn ? "q" : "p"] = c.p;
  j["R"] = c.R;
  j["norm"] = c.norm;
  j["prefactor"] = c.prefactor;
  json vals = json::object();
  for (const auto& [name, v] : c.values) {
    vals[name] = {{"value", v}, {"tilde", c.tilde_values.at(name)}, {"formula", c.tags.at(name)}};
  }
  j["values"] = vals;
  j["display_only"] = c.display_only;
  j["notes"] = c.notes;
  return j;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) fail(ErrorKind::input, "cannot write '" + out + "'");
  f << text;
}

int exit_for(const Error& e) {
  std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
  return e.kind() == ErrorKind::input || e.kind() == ErrorKind::domain ? kExitUsage
                                                                        : kExitFail;
}

// ------------------------------------------------------------------ constants

int cmd_constants(const CaseArgs& a) {
  const Family f = family_from_string(a.family);
  const int dim = f == Family::trace ? a.N - 1 : a.N;
  require(dim >= 1, ErrorKind::domain, "N too small");
  const NormSpec spec = build_norm(a, dim);
  const SharpConstants c = sharp_constants(f, a.N, family_exponent(f, a), spec, a.R);
  if (a.format == "json") {
    emit(constants_json(c).dump(2) + "\n", a.out);
    return kExitPass;
  }
  std::ostringstream os;
  os << family_label(f) << "  N=" << c.N << (f == Family::gn ? "  q=" : "  p=") << c.p
     << "  R=" << c.R << "  norm=" << c.norm << "\n";
  os << std::left << std::setw(16) << "name" << std::setw(24) << "value" << std::setw(24)
     << "tilde" << "formula\n";
  os << std::setprecision(15);
  for (const auto& [name, v] : c.values) {
    os << std::left << std::setw(16) << name << std::setw(24) << v << std::setw(24)
       << c.tilde_values.at(name) << c.tags.at(name) << "\n";
  }
  for (const auto& n : c.notes) os << "note: " << n << "\n";
  emit(os.str(), a.out);
  return kExitPass;
}

// --------------------------------------------------------------------- verify

RadialProfile named_ball_profile(const std::string& name, int N, double R) {
  if (name == "linear-cutoff") {
    return RadialProfile(
        Domain::ball, R, N, [R](double, double gap) { return gap / R; },
        [R](double, double) { return -1.0 / R; }, "linear cutoff 1 - s/R");
  }
  if (name == "quadratic-cutoff") {
    return RadialProfile(
        Domain::ball, R, N,
        [R](double s, double gap) { return (gap / R) * (1.0 + s / R); },
        [R](double s, double) { return -2.0 * s / (R * R); }, "quadratic cutoff 1 - (s/R)^2");
  }
  if (name == "cosine-cutoff") {
    const double k = 0.5 * std::numbers::pi / R;
    return RadialProfile(
        Domain::ball, R, N, [k](double, double gap) { return std::sin(k * gap); },
        [k](double, double gap) { return -k * std::cos(k * gap); },
        "cosine cutoff cos(pi s / 2R)");
  }
  fail(ErrorKind::input, "unknown ball profile '" + name +
                             "' (linear-cutoff, quadratic-cutoff, cosine-cutoff)");
}

RadialProfile named_halfline_profile(const std::string& name, int N) {
  if (name == "gaussian") {
    return RadialProfile(
        Domain::halfline, kInf, N, [](double r, double) { return std::exp(-r * r); },
        [](double r, double) { return -2.0 * r * std::exp(-r * r); }, "exp(-r^2)");
  }
  if (name == "rational") {
    return RadialProfile(
        Domain::halfline, kInf, N, [](double r, double) { return 1.0 / (1.0 + r * r); },
        [](double r, double) { return -2.0 * r / std::pow(1.0 + r * r, 2.0); },
        "(1+r^2)^-1");
  }
  fail(ErrorKind::input, "unknown half-line profile '" + name + "' (gaussian, rational)");
}

int cmd_verify(const CaseArgs& a) {
  const Family f = family_from_string(a.family);
  double k = a.k;
  const ExtremalSpec e = parse_extremal(a.extremal, k);
  const bool use_extremal = a.profile.empty() || a.profile == "extremal";
  const int dim = f == Family::trace ? a.N - 1 : a.N;
  require(dim >= 1, ErrorKind::domain, "N too small");
  const NormSpec spec = build_norm(a, dim);
  const double expo = family_exponent(f, a);
  const SharpConstants c = sharp_constants(f, a.N, expo, spec, a.R);
  const EvaluateOptions opts{a.tol_1d, a.tol_2d};
  VerificationReport rep;
  bool extremal = false;
  switch (f) {
    case Family::trace: {
      const auto map = TransplantMap::trace(a.N, a.p, a.R);
      if (use_extremal) {
        rep = evaluate_trace(spec, map, trace_extremal(e, map), c, true, opts);
      } else {
        require(a.profile == "gaussian", ErrorKind::input,
                "trace profiles: extremal, gaussian");
        const TraceProfile U(
            Domain::halfline, kInf, dim,
            [](double r, double, double t) { return std::exp(-r * r - t * t); },
            [](double r, double, double t) { return -2.0 * r * std::exp(-r * r - t * t); },
            [](double r, double, double t) { return -2.0 * t * std::exp(-r * r - t * t); },
            "exp(-r^2-t^2)");
        rep = evaluate_trace(spec, map, transplant_profile(map, U), c, false, opts);
      }
      break;
    }
    case Family::trudinger_moser: {
      require(use_extremal || a.profile == "moser", ErrorKind::input,
              "trudinger_moser profiles: moser (with --k or --extremal k=...)");
      const auto map = TransplantMap::planar(spec, a.R);
      rep = evaluate_case(f, spec, map, moser_profile(a.N, k), c, false, opts);
      break;
    }
    case Family::poincare: {
      const auto map = TransplantMap::exterior(a.N, a.p, a.R);
      extremal = use_extremal;
      const RadialProfile U = use_extremal ? extremal_profile(f, e, map)
                                           : named_halfline_profile(a.profile, a.N);
      rep = evaluate_case(f, spec, map, U, c, extremal, opts);
      break;
    }
    default: {
      const double mp = f == Family::gn || f == Family::nash ? 2.0 : a.p;
      const auto map = TransplantMap::interior(a.N, mp, a.R);
      extremal = use_extremal;
      ExtremalSpec es = e;
      es.q = expo;
      const RadialProfile V = use_extremal ? extremal_profile(f, es, map)
                                           : named_ball_profile(a.profile, a.N, a.R);
      rep = evaluate_case(f, spec, map, V, c, extremal, opts);
      break;
    }
  }
  if (a.format == "csv") {
    emit(to_csv({rep}), a.out);
  } else {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["report"] = to_json(rep);
    j["constants"] = constants_json(c);
    emit(j.dump(2) + "\n", a.out);
  }
  std::cerr << (rep.pass ? "PASS" : "FAIL") << "  " << rep.label << "  deficit "
            << rep.deficit << "  relative " << rep.relative_deficit << "  budget "
            << rep.error_budget << "\n";
  return rep.pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------- suite

int cmd_suite(const std::string& config_path, const std::string& out,
              const std::string& format, std::optional<unsigned> workers) {
  std::string path = config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("FINSLER_CONFIG")) path = env;
  }
  RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
  if (!out.empty()) cfg.output_path = out;
  if (!format.empty()) cfg.format = format;
  if (workers) cfg.workers = *workers;
  const auto results = run_suite(cfg);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << "  " << r.title
              << "  (" << std::fixed << std::setprecision(2) << r.seconds << " s)\n";
    for (const auto& err : r.errors) std::cout << "      " << err << "\n";
  }
  std::cout.unsetf(std::ios::fixed);
  const std::string text = cfg.format == "csv" ? suite_to_csv(results)
                                               : suite_to_json(results, cfg).dump(2) + "\n";
  emit(text, cfg.output_path);
  std::cout << "report written to " << cfg.output_path << "\n";
  return all ? kExitPass : kExitFail;
}

// ------------------------------------------------------------------- plotdata

std::vector<double> plot_grid(double R) {
  std::set<double> pts;
  for (int k = 1; k < 20; ++k) pts.insert(R * k / 20.0);
  for (int j = 1; j <= 40; ++j) pts.insert(R * (1.0 - std::ldexp(1.0, -j)));
  std::vector<double> out;
  for (double s : pts) {
    if (s > 0.0 && s < R) out.push_back(s);
  }
  return out;
}

int cmd_plotdata(const CaseArgs& a) {
  const std::string kind = a.map.empty() ? "interior" : a.map;
  double k = a.k;
  const ExtremalSpec e = parse_extremal(a.extremal, k);
  std::ostringstream os;
  os << std::setprecision(17);
  const auto grid = plot_grid(a.R);
  if (kind == "interior") {
    const Family f = a.family.empty() ? Family::sobolev : family_from_string(a.family);
    require(f == Family::sobolev || f == Family::gn || f == Family::nash ||
                f == Family::logsob,
            ErrorKind::input, "interior plot data: sobolev, gn, nash or logsob");
    const double mp = f == Family::gn || f == Family::nash ? 2.0 : a.p;
    const auto map = TransplantMap::interior(a.N, mp, a.R);
    ExtremalSpec es = e;
    if (f == Family::gn) es.q = a.q.value_or(2.0);
    const auto V = extremal_profile(f, es, map);
    os << "s,profile,weight\n";
    for (double s : grid) {
      const double gap = a.R - s;
      os << s << ',' << V.value(s, gap) << ','
         << weight_at(map, WeightKind::interior_weight, s, gap) << '\n';
    }
  } else if (kind == "trace") {
    const auto map = TransplantMap::trace(a.N, a.p, a.R);
    const auto V = trace_extremal(e, map);
    os << "s,profile,weight\n";
    for (double s : grid) {
      const double gap = a.R - s;
      os << s << ',' << V.value(s, gap, 0.0) << ','
         << weight_at(map, WeightKind::trace_A_R, s, gap) << '\n';
    }
  } else if (kind == "exterior" || kind == "planar") {
    const NormSpec spec = build_norm(a, a.N);
    const auto map = kind == "exterior" ? TransplantMap::exterior(a.N, a.p, a.R)
                                        : TransplantMap::planar(spec, a.R);
    const RadialProfile U = kind == "exterior"
                                ? extremal_profile(Family::poincare, e, map)
                                : moser_profile(a.N, k);
    os << "r,profile,weight\n";
    for (double s : grid) {
      const double r = map_inverse(map, s, a.R - s);
      os << r << ',' << U.value(r) << ',' << weight_at(map, natural_weight(map), r) << '\n';
    }
  } else {
    fail(ErrorKind::input, "unknown --map '" + kind + "' (interior, exterior, trace, planar)");
  }
  emit(os.str(), a.out);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finsler-norm functional inequalities: constants, transplantation and "
               "numerical verification"};
  app.require_subcommand(1);

  CaseArgs ca;
  auto* constants = app.add_subcommand("constants", "print sharp constants");
  constants->add_option("--family", ca.family, "sobolev|gn|nash|logsob|poincare|trace|trudinger_moser")
      ->required();
  add_case_options(constants, ca);
  std::string cformat = "text";
  constants->add_option("--format", cformat, "text|json")->check(CLI::IsMember({"text", "json"}));
  constants->add_option("--out", ca.out, "output file");

  CaseArgs va;
  auto* verify = app.add_subcommand("verify", "evaluate one inequality instance");
  verify->add_option("--family", va.family, "inequality family")->required();
  add_case_options(verify, va);
  verify->add_option("--extremal", va.extremal, "extremal parameters, e.g. a=1,b=1");
  verify->add_option("--profile", va.profile,
                     "extremal | linear-cutoff | quadratic-cutoff | cosine-cutoff | "
                     "gaussian | rational | moser");
  verify->add_option("--k", va.k, "truncation level of the Moser profile");
  verify->add_option("--tol-1d", va.tol_1d, "1-D quadrature tolerance");
  verify->add_option("--tol-2d", va.tol_2d, "2-D quadrature tolerance");
  verify->add_option("--format", va.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--out", va.out, "output file");

  std::string config_path, suite_out, suite_format;
  std::optional<unsigned> suite_workers;
  auto* suite = app.add_subcommand("suite", "run the acceptance battery");
  suite->add_option("--config", config_path, "JSON config (default: $FINSLER_CONFIG)");
  suite->add_option("--out", suite_out, "report file");
  suite->add_option("--format", suite_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  suite->add_option("--workers", suite_workers, "worker threads, 0 = all cores");

  CaseArgs pa;
  auto* plot = app.add_subcommand("plotdata", "tabulate profiles and weights as CSV");
  plot->add_option("--map", pa.map, "interior|exterior|trace|planar");
  plot->add_option("--family", pa.family, "family of the tabulated extremal");
  add_case_options(plot, pa);
  plot->add_option("--extremal", pa.extremal, "extremal parameters");
  plot->add_option("--k", pa.k, "truncation level of the Moser profile");
  plot->add_option("--out", pa.out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*constants) {
      ca.format = cformat;
      return cmd_constants(ca);
    }
    if (*verify) return cmd_verify(va);
    if (*suite) return cmd_suite(config_path, suite_out, suite_format, suite_workers);
    if (*plot) return cmd_plotdata(pa);
  } catch (const Error& e) {
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
