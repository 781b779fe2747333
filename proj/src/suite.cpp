#include "finsler/suite.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "finsler/error.hpp"
#include "finsler/inequalities.hpp"
#include "finsler/norms.hpp"
#include "finsler/specfun.hpp"
#include "finsler/transplant.hpp"

namespace finsler {

std::string describe_params(const VerificationReport& r);

namespace {

using std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

Check rel_check(std::string name, double value, double reference, double tol) {
  Check c{std::move(name), value, reference, tol, false, "relative"};
  c.pass = std::abs(value - reference) <= tol * std::abs(reference);
  return c;
}

Check max_check(std::string name, double value, double bound, std::string note = "") {
  Check c{std::move(name), value, 0.0, bound, false, std::move(note)};
  c.pass = std::isfinite(value) && value <= bound;
  return c;
}

Check flag_check(std::string name, bool ok, std::string note = "") {
  return Check{std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, ok, std::move(note)};
}

// Runs `body`, turning any failure into a failed check carrying the message.
void guarded(CriterionResult& out, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    out.errors.push_back(name + ": " + std::string(to_string(e.kind())) + ": " + e.what());
    out.checks.push_back(flag_check(name, false, e.what()));
  } catch (const std::exception& e) {
    out.errors.push_back(name + ": " + e.what());
    out.checks.push_back(flag_check(name, false, e.what()));
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<double> lq_weights(int dim) {
  static const double w[] = {1.0, 2.0, 0.5, 1.5, 0.75, 1.25};
  return std::vector<double>(w, w + dim);
}

NormSpec weighted_l4(int dim) { return NormSpec::weighted_lq(4.0, lq_weights(dim)); }

NormSpec generic_quadratic() {
  return quadratic_norm({{2.0, 0.5, 0.0}, {0.5, 1.0, 0.3}, {0.0, 0.3, 1.5}});
}

std::optional<NormSpec> config_norm(const RunConfig& cfg) {
  if (!cfg.norm) return std::nullopt;
  return parse_norm(*cfg.norm);
}

EvaluateOptions eval_options(const RunConfig& cfg) {
  return {cfg.tolerances.tol_1d, cfg.tolerances.tol_2d};
}

EquivalenceOptions equiv_options(const RunConfig& cfg) {
  return {cfg.tolerances.tol_1d, cfg.tolerances.tol_2d, cfg.tolerances.equivalence};
}

bool family_selected(const RunConfig& cfg, Family f) {
  if (cfg.families.empty()) return true;
  for (Family g : cfg.families) {
    if (g == f) return true;
  }
  return false;
}

// ---------------------------------------------------------------- criterion 1

// S_{N,p} straight from std::lgamma, no shared code with sharp_constants.
double sobolev_constant_lgamma(double N, double p) {
  const double pp = p / (p - 1.0);
  return std::pow(pi, p / 2.0) * N * std::pow((N - p) / (p - 1.0), p - 1.0) *
         std::exp((p / N) * (std::lgamma(N / p) + std::lgamma(1.0 + N / pp) -
                             std::lgamma(N) - std::lgamma(1.0 + N / 2.0)));
}

void criterion1(CriterionResult& out, const RunConfig& cfg) {
  const double tol = cfg.tolerances.constants;
  guarded(out, "S_{3,2}", [&] {
    const auto c = sharp_constants(Family::sobolev, 3, 2.0, NormSpec::euclidean(3));
    out.checks.push_back(rel_check("S_{3,2} vs 3(pi/2)^(4/3)", c.value("S"),
                                   3.0 * std::pow(pi / 2.0, 4.0 / 3.0), tol));
    out.checks.push_back(rel_check("S_{3,2} vs std::lgamma evaluation", c.value("S"),
                                   sobolev_constant_lgamma(3.0, 2.0), tol));
  });
  for (int N : {3, 4, 5}) {
    guarded(out, "L_2(N=" + std::to_string(N) + ")", [&] {
      const auto c = sharp_constants(Family::logsob, N, 2.0, NormSpec::euclidean(N));
      out.checks.push_back(rel_check("L_2(N=" + std::to_string(N) + ") vs 2/(N pi e)",
                                     c.value("L"), 2.0 / (N * pi * std::numbers::e), tol));
    });
  }
}

// ---------------------------------------------------------------- criterion 2

void criterion2(CriterionResult& out, const RunConfig& cfg) {
  struct Case {
    Family f;
    int N;
    double p;
  };
  const std::vector<Case> cases = {
      {Family::sobolev, 3, 2.0}, {Family::sobolev, 3, 2.5}, {Family::sobolev, 4, 2.0},
      {Family::sobolev, 4, 3.0}, {Family::sobolev, 5, 2.0}, {Family::gn, 3, 2.0},
      {Family::gn, 3, 3.0},      {Family::gn, 4, 1.5},      {Family::gn, 4, 2.0},
      {Family::nash, 3, 2.0},    {Family::nash, 4, 2.0},    {Family::nash, 5, 2.0},
      {Family::logsob, 3, 2.0},  {Family::logsob, 4, 2.0},  {Family::logsob, 4, 3.0},
      {Family::trace, 4, 2.0},   {Family::trace, 5, 2.0},   {Family::trace, 5, 3.0}};
  const double tol = cfg.tolerances.constants;
  for (const auto& k : cases) {
    const std::string tag = to_string(k.f) + "(N=" + std::to_string(k.N) + ", " +
                            (k.f == Family::gn ? "q=" : "p=") + fmt(k.p) + ")";
    guarded(out, tag, [&] {
      const int dim = k.f == Family::trace ? k.N - 1 : k.N;
      const auto c = sharp_constants(k.f, k.N, k.p, NormSpec::euclidean(dim));
      out.checks.push_back(rel_check(tag + " prefactor", c.prefactor, 1.0, tol));
      for (const auto& [name, value] : c.values) {
        out.checks.push_back(rel_check(tag + " " + name + " tilde", c.tilde(name), value, tol));
      }
    });
  }
}

// ---------------------------------------------------------------- criterion 3

void criterion3(CriterionResult& out, const RunConfig& cfg) {
  const std::vector<NormSpec> norms = {NormSpec::euclidean(3), weighted_l4(3),
                                       generic_quadratic()};
  const double tol = cfg.tolerances.identity;
  for (std::size_t n = 0; n < norms.size(); ++n) {
    const NormSpec& spec = norms[n];
    const std::string tag = describe(spec);
    guarded(out, tag, [&] {
      std::mt19937_64 rng(cfg.seed + 1000 * (n + 1));
      std::uniform_real_distribution<double> U(-2.0, 2.0);
      auto draw = [&] {
        std::vector<double> x(spec.dim());
        for (;;) {
          bool ok = true;
          for (auto& v : x) {
            v = U(rng);
            ok = ok && std::abs(v) >= 1e-6;
          }
          if (ok) return x;
        }
      };
      double euler = 0.0, h_of_dual = 0.0, dual_of_h = 0.0, inverse = 0.0;
      for (int i = 0; i < 200; ++i) {
        const auto xi = draw();
        const auto x = draw();
        const double H = norm_eval(spec, xi);
        const auto g = norm_grad(spec, xi);
        double dot = 0.0;
        for (int k = 0; k < spec.dim(); ++k) dot += g[k] * xi[k];
        euler = std::max(euler, std::abs(dot - H) / H);
        dual_of_h = std::max(dual_of_h, std::abs(dual_eval(spec, g) - 1.0));
        const auto g0 = dual_grad(spec, x);
        h_of_dual = std::max(h_of_dual, std::abs(norm_eval(spec, g0) - 1.0));
        const double H0 = dual_eval(spec, x);
        const auto back = norm_grad(spec, g0);
        for (int k = 0; k < spec.dim(); ++k) {
          inverse = std::max(inverse, std::abs(H0 * back[k] - x[k]));
        }
      }
      out.checks.push_back(max_check(tag + " grad H(xi).xi = H(xi)", euler, tol, "relative"));
      out.checks.push_back(max_check(tag + " H(grad H0(x)) = 1", h_of_dual, tol));
      out.checks.push_back(max_check(tag + " H0(grad H(xi)) = 1", dual_of_h, tol));
      out.checks.push_back(
          max_check(tag + " H0(x) grad H(grad H0(x)) = x", inverse, tol, "componentwise"));
    });
  }
}

// ---------------------------------------------------------------- criterion 4

void criterion4(CriterionResult& out, const RunConfig& cfg) {
  const std::vector<NormSpec> norms = {NormSpec::euclidean(3), weighted_l4(3),
                                       NormSpec::weighted_lq(1.0, {1.0, 1.0, 1.0})};
  struct H {
    std::string name;
    std::function<double(double)> h;
  };
  const std::vector<H> hs = {
      {"1", [](double) { return 1.0; }},
      {"s", [](double s) { return s; }},
      {"s^2", [](double s) { return s * s; }},
      {"exp(-s^2)", [](double s) { return std::exp(-s * s); }},
      {"cos(pi s / 2)", [](double s) { return std::cos(0.5 * pi * s); }}};
  std::uint64_t stream = 0;
  for (const auto& spec : norms) {
    for (const auto& h : hs) {
      const std::string tag = describe(spec) + " h=" + h.name;
      const std::uint64_t seed = cfg.seed + 7919 * (++stream);
      guarded(out, tag, [&] {
        const double polar = polar_integral(spec, h.h, 1.0, cfg.tolerances.tol_1d);
        const auto mc = quad::mc_wulff_integral(
            spec, 1.0,
            [&](std::span<const double> x) { return h.h(dual_eval(spec, x)); },
            cfg.mc_samples, seed, 0);
        // A constant integrand over a Wulff ball that fills its bounding box
        // (the l^inf ball) has zero sampling variance; rounding then sets the
        // scale.
        const double se = std::max(mc.standard_error, 1e-12 * std::abs(polar));
        Check c = max_check(tag + " |polar - MC| / SE", std::abs(polar - mc.estimate) / se,
                            3.0, "polar " + fmt(polar) + ", MC " + fmt(mc.estimate) +
                                     ", SE " + fmt(mc.standard_error));
        out.checks.push_back(c);
      });
    }
  }
}

// ---------------------------------------------------------------- criterion 5

struct NamedProfile {
  std::string name;
  std::function<double(double)> U;
  std::function<double(double)> dU;
};

std::vector<NamedProfile> radial_battery() {
  return {
      {"(1+r^2)^-1", [](double r) { return 1.0 / (1.0 + r * r); },
       [](double r) { return -2.0 * r / ((1.0 + r * r) * (1.0 + r * r)); }},
      {"exp(-r)", [](double r) { return std::exp(-r); },
       [](double r) { return -std::exp(-r); }},
      {"(1+r)^-2", [](double r) { return std::pow(1.0 + r, -2.0); },
       [](double r) { return -2.0 * std::pow(1.0 + r, -3.0); }},
      {"(1+r) exp(-r^2)", [](double r) { return (1.0 + r) * std::exp(-r * r); },
       [](double r) {
         const double e = std::exp(-r * r);
         return e == 0.0 ? 0.0 : (1.0 - 2.0 * r * (1.0 + r)) * e;
       }},
      {"(1+r^3)^-1", [](double r) { return 1.0 / (1.0 + r * r * r); },
       [](double r) {
         // Below the smallest double once r > 1e100.
         return r > 1e100 ? 0.0 : -3.0 * r * r / std::pow(1.0 + r * r * r, 2.0);
       }}};
}

struct NamedTrace {
  std::string name;
  std::function<double(double, double)> U, Ur, Ut;
};

std::vector<NamedTrace> trace_battery() {
  return {
      {"((1+t)^2+r^2)^-1", [](double r, double t) { return 1.0 / ((1 + t) * (1 + t) + r * r); },
       [](double r, double t) { return -2.0 * r / std::pow((1 + t) * (1 + t) + r * r, 2.0); },
       [](double r, double t) {
         return -2.0 * (1 + t) / std::pow((1 + t) * (1 + t) + r * r, 2.0);
       }},
      {"exp(-r-t)", [](double r, double t) { return std::exp(-r - t); },
       [](double r, double t) { return -std::exp(-r - t); },
       [](double r, double t) { return -std::exp(-r - t); }},
      {"exp(-r^2-t^2)", [](double r, double t) { return std::exp(-r * r - t * t); },
       [](double r, double t) {
         const double e = std::exp(-r * r - t * t);
         return e == 0.0 ? 0.0 : -2.0 * r * e;
       },
       [](double r, double t) {
         const double e = std::exp(-r * r - t * t);
         return e == 0.0 ? 0.0 : -2.0 * t * e;
       }},
      {"(1+r^2+t)^-2", [](double r, double t) { return std::pow(1.0 + r * r + t, -2.0); },
       [](double r, double t) { return -4.0 * r * std::pow(1.0 + r * r + t, -3.0); },
       [](double r, double t) { return -2.0 * std::pow(1.0 + r * r + t, -3.0); }},
      {"exp(-t)/(1+r^2)", [](double r, double t) { return std::exp(-t) / (1.0 + r * r); },
       [](double r, double t) {
         return -2.0 * r * std::exp(-t) / ((1.0 + r * r) * (1.0 + r * r));
       },
       [](double r, double t) { return -std::exp(-t) / (1.0 + r * r); }}};
}

void record(CriterionResult& out, VerificationReport rep) {
  out.checks.push_back(max_check(rep.label + " " + rep.norm + " " + rep.profile + " " +
                                     describe_params(rep),
                                 rep.extras.at("relative_mismatch"),
                                 rep.extras.at("threshold"), "relative mismatch"));
  out.reports.push_back(std::move(rep));
}

void criterion5(CriterionResult& out, const RunConfig& cfg) {
  const auto opts = equiv_options(cfg);
  const std::vector<NormSpec> norms3 = {NormSpec::euclidean(3), weighted_l4(3),
                                        generic_quadratic()};
  const std::vector<Observable> observables = {
      Observable::energy(),
      Observable::functional([](double u) { return u * u; }, "F(u)=u^2")};
  for (const auto& spec : norms3) {
    const std::vector<TransplantMap> maps = {TransplantMap::interior(3, 2.0, 1.0),
                                             TransplantMap::exterior(3, 2.0, 1.0),
                                             TransplantMap::planar(spec, 1.0)};
    for (const auto& map : maps) {
      for (const auto& prof : radial_battery()) {
        const RadialProfile U(
            Domain::halfline, kInf, 3, [f = prof.U](double r, double) { return f(r); },
            [f = prof.dU](double r, double) { return f(r); }, prof.name);
        for (const auto& obs : observables) {
          guarded(out, map.describe() + " " + describe(spec) + " " + prof.name + " " + obs.label,
                  [&] { record(out, equivalence_check(map, spec, U, obs, opts)); });
        }
      }
    }
    // The trace identity: N = 4 with the norm on R^3.
    const TransplantMap tmap = TransplantMap::trace(4, 2.0, 1.0);
    for (const auto& prof : trace_battery()) {
      const TraceProfile U(
          Domain::halfline, kInf, 3, [f = prof.U](double r, double, double t) { return f(r, t); },
          [f = prof.Ur](double r, double, double t) { return f(r, t); },
          [f = prof.Ut](double r, double, double t) { return f(r, t); }, prof.name);
      for (const auto& obs : observables) {
        guarded(out, tmap.describe() + " " + describe(spec) + " " + prof.name + " " + obs.label,
                [&] { record(out, equivalence_check(tmap, spec, U, obs, opts)); });
      }
    }
  }
}

// ---------------------------------------------------------------- criterion 6

void extremal_case(CriterionResult& out, const RunConfig& cfg, Family family, int N,
                   double p, const NormSpec& spec, const ExtremalSpec& e) {
  const std::string tag = to_string(family) + "(N=" + std::to_string(N) + ", " +
                          (family == Family::gn ? "q=" : "p=") + fmt(p) + ") " +
                          describe(spec);
  guarded(out, tag, [&] {
    const auto opts = eval_options(cfg);
    const auto c = sharp_constants(family, N, p, spec, cfg.R);
    VerificationReport rep;
    if (family == Family::trace) {
      const auto map = TransplantMap::trace(N, p, cfg.R);
      rep = evaluate_trace(spec, map, trace_extremal(e, map), c, true, opts);
    } else {
      const double mp = family == Family::gn || family == Family::nash ? 2.0 : p;
      const auto map = family == Family::poincare ? TransplantMap::exterior(N, mp, cfg.R)
                                                  : TransplantMap::interior(N, mp, cfg.R);
      ExtremalSpec spec_e = e;
      if (family == Family::gn) spec_e.q = p;
      rep = evaluate_case(family, spec, map, extremal_profile(family, spec_e, map), c, true,
                          opts);
    }
    Check ch = max_check(tag + " |relative deficit|", std::abs(rep.relative_deficit),
                         cfg.tolerances.extremal,
                         std::string("report pass: ") + (rep.pass ? "yes" : "no"));
    out.checks.push_back(ch);
    out.reports.push_back(std::move(rep));
  });
}

void criterion6(CriterionResult& out, const RunConfig& cfg) {
  const auto extra = config_norm(cfg);
  auto norms_for = [&](int dim) {
    std::vector<NormSpec> v = {NormSpec::euclidean(dim), weighted_l4(dim)};
    if (extra && extra->dim() == dim && extra->kind() != NormSpec::Kind::euclidean) {
      v.push_back(*extra);
    }
    return v;
  };
  ExtremalSpec e;
  for (int N : {3, 4}) {
    for (double p : {2.0, 2.5}) {
      if (!family_selected(cfg, Family::sobolev)) break;
      for (const auto& spec : norms_for(N)) extremal_case(out, cfg, Family::sobolev, N, p, spec, e);
    }
  }
  if (family_selected(cfg, Family::gn)) {
    for (double q : {2.0, 3.0}) {
      for (const auto& spec : norms_for(3)) extremal_case(out, cfg, Family::gn, 3, q, spec, e);
    }
  }
  if (family_selected(cfg, Family::nash)) {
    for (int N : {3, 4}) {
      for (const auto& spec : norms_for(N)) extremal_case(out, cfg, Family::nash, N, 2.0, spec, e);
    }
  }
  if (family_selected(cfg, Family::logsob)) {
    for (const auto& spec : norms_for(3)) extremal_case(out, cfg, Family::logsob, 3, 2.0, spec, e);
  }
  if (family_selected(cfg, Family::poincare)) {
    for (const auto& spec : norms_for(3)) extremal_case(out, cfg, Family::poincare, 3, 2.0, spec, e);
  }
  if (family_selected(cfg, Family::trace)) {
    for (const auto& spec : norms_for(3)) extremal_case(out, cfg, Family::trace, 4, 2.0, spec, e);
  }
}

// ---------------------------------------------------------------- criterion 7

void criterion7(CriterionResult& out, const RunConfig& cfg) {
  const auto extra = config_norm(cfg);
  const NormSpec spec = extra && extra->dim() == 3 ? *extra : NormSpec::euclidean(3);
  const auto opts = eval_options(cfg);
  const auto map = TransplantMap::interior(3, 2.0, cfg.R);
  const auto c = sharp_constants(Family::sobolev, 3, 2.0, spec, cfg.R);
  guarded(out, "transverse bumps", [&] {
    const auto base = extremal_profile(Family::sobolev, ExtremalSpec{}, map);
    const auto res = perturbation_check(Family::sobolev, spec, map, base, 0.1, 3, c, opts);
    Check ch{"sobolev delta=0.1 bumps: min deficit / budget",
             res.min_deficit / res.budget_at_min, 10.0, 0.0, false,
             "min deficit " + fmt(res.min_deficit) + ", budget " + fmt(res.budget_at_min)};
    ch.pass = res.min_deficit > 10.0 * res.budget_at_min;
    out.checks.push_back(ch);
    for (const auto& r : res.reports) out.reports.push_back(r);
  });
  guarded(out, "in-family a -> a + delta", [&] {
    ExtremalSpec e;
    e.a = 1.1;
    const auto rep = evaluate_case(Family::sobolev, spec, map,
                                   extremal_profile(Family::sobolev, e, map), c, true, opts);
    Check ch{"sobolev a=1.1: |deficit| within budget", std::abs(rep.deficit),
             0.0, rep.error_budget, std::abs(rep.deficit) <= rep.error_budget, ""};
    out.checks.push_back(ch);
    out.reports.push_back(rep);
  });
}

// ---------------------------------------------------------------- criterion 8

void criterion8(CriterionResult& out, const RunConfig&) {
  guarded(out, "lambda1(3, 2)", [&] {
    out.checks.push_back(
        rel_check("lambda1(3, 2) vs pi^2", plap_first_eigenvalue(3, 2.0), pi * pi, 1e-8));
  });
  guarded(out, "lambda1(2, 2)", [&] {
    const double j = specfun::bessel_first_zero(0.0).value;
    out.checks.push_back(
        rel_check("lambda1(2, 2) vs j_{0,1}^2", plap_first_eigenvalue(2, 2.0), j * j, 1e-8));
  });
  guarded(out, "lambda1(3, 2.5)", [&] {
    out.checks.push_back(rel_check("lambda1(3, 2.5) vs finite-difference oracle",
                                   plap_first_eigenvalue(3, 2.5), kPlapFdOracle_3_2p5,
                                   1e-4));
  });
}

// ---------------------------------------------------------------- criterion 9

double bisect_tan_minus_x() {
  double lo = pi + 1e-9, hi = 1.5 * pi - 1e-9;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (std::tan(mid) - mid < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void criterion9(CriterionResult& out, const RunConfig& cfg) {
  constexpr double kMu3 = 4.493409457909064;
  guarded(out, "mu chain", [&] {
    const double oracle = bisect_tan_minus_x();
    const auto zero = specfun::bessel_first_zero(1.5);
    out.checks.push_back(max_check("bisection of tan x - x vs 4.493409457909064",
                                   std::abs(oracle - kMu3), 1e-10));
    out.checks.push_back(max_check("bessel_first_zero(3/2) vs bisection oracle",
                                   std::abs(zero.value - oracle), 1e-10));
    const NormSpec spec = NormSpec::euclidean(3);
    const auto c = sharp_constants(Family::nash, 3, 2.0, spec, cfg.R);
    out.checks.push_back(flag_check("Nash constants carry this mu bit for bit",
                                    c.value("mu") == zero.value));
    const double B = 2.0 * std::pow(2.5, 1.0 + 2.0 / 3.0) * std::pow(3.0, -1.0 + 2.0 / 3.0) /
                     (zero.value * zero.value * std::pow(4.0 * pi, 2.0 / 3.0));
    out.checks.push_back(rel_check("B from this mu", c.value("B"), B, 1e-13));
    ExtremalSpec e;
    e.mu = zero.value;
    const auto map = TransplantMap::interior(3, 2.0, cfg.R);
    const auto rep = evaluate_case(Family::nash, spec, map,
                                   extremal_profile(Family::nash, e, map), c, true,
                                   eval_options(cfg));
    out.checks.push_back(flag_check("equality check consumed this mu bit for bit",
                                    rep.extras.at("mu") == zero.value));
    out.checks.push_back(max_check("equality check |relative deficit|",
                                   std::abs(rep.relative_deficit), cfg.tolerances.extremal));
    out.reports.push_back(rep);
  });
}

// --------------------------------------------------------------- criterion 10

void criterion10(CriterionResult& out, const RunConfig& cfg) {
  const auto extra = config_norm(cfg);
  std::vector<NormSpec> norms = {NormSpec::euclidean(3), weighted_l4(3)};
  if (extra && extra->dim() == 3 && extra->kind() != NormSpec::Kind::euclidean) {
    norms.push_back(*extra);
  }
  const auto eopts = equiv_options(cfg);
  const auto vopts = eval_options(cfg);
  const Observable F = Observable::functional(
      [](double u) { return std::exp(4.0 * pi * u * u); }, "F(u)=exp(4 pi u^2)");
  for (const auto& spec : norms) {
    const auto map = TransplantMap::planar(spec, cfg.R);
    const auto c = sharp_constants(Family::trudinger_moser, 3, 2.0, spec, cfg.R);
    for (int k = 1; k <= 10; ++k) {
      const std::string tag = describe(spec) + " k=" + std::to_string(k);
      guarded(out, tag, [&] {
        const auto U = moser_profile(3, k);
        auto rep = evaluate_case(Family::trudinger_moser, spec, map, U, c, false, vopts);
        const double f = rep.extras.at("functional");
        Check ch = max_check(tag + " functional <= 5 pi R^2", f,
                             rep.extras.at("functional_bound") + rep.extras.at("functional_error"),
                             "energy " + fmt(rep.lhs) + " of budget " + fmt(rep.rhs));
        ch.pass = ch.pass && rep.pass;
        out.checks.push_back(ch);
        out.reports.push_back(rep);
        record(out, equivalence_check(map, spec, U, Observable::energy(), eopts));
        record(out, equivalence_check(map, spec, U, F, eopts));
      });
    }
  }
}

}  // namespace

std::string criterion_title(int id) {
  switch (id) {
    case 1: return "constants anchor";
    case 2: return "euclidean reduction of tilde constants";
    case 3: return "norm identities at random points";
    case 4: return "polar formula vs Monte Carlo";
    case 5: return "transplant identities";
    case 6: return "equality at extremals";
    case 7: return "strictness under perturbation";
    case 8: return "p-Laplacian eigenvalues";
    case 9: return "Nash constant chain";
    case 10: return "Trudinger-Moser boundedness witness";
  }
  return "unknown";
}

double criterion_runtime_limit(int id) {
  switch (id) {
    case 1: return 1.0;
    case 2: return 1.0;
    case 3: return 10.0;
    case 4: return 60.0;
    case 5: return 120.0;
    case 6: return 600.0;
    case 7: return 60.0;
    case 8: return 60.0;
    case 9: return 60.0;
    case 10: return 120.0;
  }
  return 0.0;
}

CriterionResult run_criterion(int id, const RunConfig& config) {
  CriterionResult out;
  out.id = id;
  out.title = criterion_title(id);
  out.runtime_limit = criterion_runtime_limit(id);
  const auto t0 = std::chrono::steady_clock::now();
  guarded(out, "criterion " + std::to_string(id), [&] {
    switch (id) {
      case 1: criterion1(out, config); break;
      case 2: criterion2(out, config); break;
      case 3: criterion3(out, config); break;
      case 4: criterion4(out, config); break;
      case 5: criterion5(out, config); break;
      case 6: criterion6(out, config); break;
      case 7: criterion7(out, config); break;
      case 8: criterion8(out, config); break;
      case 9: criterion9(out, config); break;
      case 10: criterion10(out, config); break;
      default: fail(ErrorKind::input, "unknown criterion " + std::to_string(id));
    }
  });
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.pass = !out.checks.empty() && out.errors.empty();
  for (const auto& c : out.checks) out.pass = out.pass && c.pass;
  return out;
}

std::vector<CriterionResult> run_suite(const RunConfig& config) {
  std::vector<int> ids = config.criteria;
  if (ids.empty()) ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<CriterionResult> results(ids.size());
  unsigned workers = config.workers == 0 ? std::thread::hardware_concurrency() : config.workers;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(ids.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < ids.size(); i = next++) {
      results[i] = run_criterion(ids[i], config);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return results;
}

std::string describe_params(const VerificationReport& r) {
  std::string out = "(";
  for (const auto& [k, v] : r.params) {
    if (out.size() > 1) out += ", ";
    out += k + "=" + fmt(v);
  }
  return out + ")";
}

nlohmann::json suite_to_json(const std::vector<CriterionResult>& results,
                             const RunConfig& config) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = config_to_json(config);
  bool all = !results.empty();
  nlohmann::json crit = nlohmann::json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    nlohmann::json c;
    c["id"] = r.id;
    c["title"] = r.title;
    c["pass"] = r.pass;
    c["runtime_limit_seconds"] = r.runtime_limit;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& k : r.checks) {
      checks.push_back({{"name", k.name},
                        {"value", std::isfinite(k.value) ? nlohmann::json(k.value)
                                                         : nlohmann::json("non-finite")},
                        {"reference", k.reference},
                        {"tolerance", k.tolerance},
                        {"pass", k.pass},
                        {"note", k.note}});
    }
    c["checks"] = checks;
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& rep : r.reports) reps.push_back(to_json(rep));
    c["reports"] = reps;
    c["errors"] = r.errors;
    crit.push_back(c);
  }
  j["criteria"] = crit;
  j["all_pass"] = all;
  return j;
}

std::string suite_to_csv(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  os << "criterion,check,value,reference,tolerance,pass\n";
  for (const auto& r : results) {
    for (const auto& c : r.checks) {
      std::string name = c.name;
      for (auto& ch : name) {
        if (ch == ',' || ch == '"') ch = ';';
      }
      std::ostringstream v;
      v.precision(17);
      v << r.id << ',' << name << ',' << c.value << ',' << c.reference << ','
        << c.tolerance << ',' << (c.pass ? 1 : 0) << '\n';
      os << v.str();
    }
  }
  return os.str();
}

}  // namespace finsler
