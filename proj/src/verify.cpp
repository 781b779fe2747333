#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "finsler/error.hpp"
#include "finsler/inequalities.hpp"
#include "finsler/quadrature.hpp"

namespace finsler {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Relative accuracy of the closed-form constants (log-gamma, Bessel zero).
constexpr double kConstantRel = 1e-12;
// Relative accuracy of the shooting eigenvalue and eigenfunction.
constexpr double kShootingRel = 1e-9;

struct Integral {
  double value = 0.0;
  double rel = 0.0;  // relative uncertainty
};

Integral take(const quad::QuadResult& r, double scale, double tol, const std::string& what) {
  if (!r.converged) {
    fail(ErrorKind::precision, "evaluate: " + what + " did not reach the requested tolerance",
         scale * r.value);
  }
  const double v = scale * r.value;
  const double abs_err = std::max(r.error_estimate, tol * std::abs(r.value));
  const double rel = r.value == 0.0 ? 0.0 : abs_err / std::abs(r.value);
  return {v, rel};
}

double ipow(double x, int k) { return std::pow(x, k); }

template <class F>
quad::QuadResult named(const std::string& what, F&& run) {
  try {
    return run();
  } catch (const Error& e) {
    fail(e.kind(), what + ": " + e.what(), e.value());
  }
}

// N kappa int_0^R f(s, gap) s^(N-1) ds.
Integral ball_integral(const RadialProfile& V, double nk,
                       const std::function<double(double, double)>& f, double tol,
                       const std::string& what) {
  const int N = V.dim();
  const auto r = named(what, [&] {
    return quad::integrate_ball(
        [&](double s, double gap) {
          const double v = f(s, gap);
          return v == 0.0 ? 0.0 : v * ipow(s, N - 1);
        },
        V.radius(), tol, V.breakpoints());
  });
  return take(r, nk, tol, what);
}

// N kappa int_0^inf f(r) r^(N-1) dr.
Integral halfline_integral(const RadialProfile& U, double nk,
                           const std::function<double(double)>& f, double tol,
                           const std::string& what) {
  const int N = U.dim();
  const auto r = named(what, [&] {
    return quad::integrate_halfline(
        [&](double x) {
          const double v = f(x);
          return v == 0.0 ? 0.0 : v * ipow(x, N - 1);
        },
        tol, U.breakpoints());
  });
  return take(r, nk, tol, what);
}

VerificationReport base_report(Family family, const NormSpec& spec,
                               const TransplantMap& map, const std::string& profile,
                               const SharpConstants& c, bool extremal) {
  VerificationReport rep;
  rep.family = to_string(family);
  rep.label = family_label(family);
  rep.params = {{"N", map.ambient_dim()}, {"R", map.R()}};
  rep.params[family == Family::gn ? "q" : "p"] = c.p;
  if (family == Family::gn) rep.params["p"] = map.p();
  rep.norm = describe(spec);
  rep.profile = profile;
  rep.extremal = extremal;
  return rep;
}

void finish(VerificationReport& rep, double lhs, double lhs_rel, double rhs,
            double rhs_rel, double scale) {
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.ratio = rhs / lhs;
  rep.deficit = rhs - lhs;
  rep.relative_deficit = rep.deficit / scale;
  rep.error_budget = std::abs(lhs) * lhs_rel + std::abs(rhs) * rhs_rel +
                     16.0 * kEps * (std::abs(lhs) + std::abs(rhs));
  rep.pass = std::isfinite(rep.deficit) &&
             inequality_pass(rep.deficit, rep.error_budget, rep.extremal);
  rep.extras["lhs_relative_error"] = lhs_rel;
  rep.extras["rhs_relative_error"] = rhs_rel;
}

void check_constants(Family family, const SharpConstants& c, const TransplantMap& map,
                     const NormSpec& spec) {
  require(c.family == family, ErrorKind::input,
          "evaluate: constants belong to family " + to_string(c.family));
  require(!c.display_only, ErrorKind::domain,
          "evaluate: the p = 1 branch is display only and is not verified");
  const int dim = family == Family::trace ? map.ambient_dim() - 1 : map.ambient_dim();
  require(spec.dim() == dim, ErrorKind::input,
          "evaluate: norm dimension " + std::to_string(spec.dim()) +
              " differs from the required " + std::to_string(dim));
  require(c.N == map.ambient_dim(), ErrorKind::input,
          "evaluate: constants and map disagree on N");
  require(std::abs(c.R - map.R()) <= 1e-14 * map.R() || family != Family::trudinger_moser,
          ErrorKind::input, "evaluate: constants and map disagree on R");
}

void require_vanishing(const RadialProfile& V) {
  const auto bc = V.boundary_check();
  if (!bc.vanishes) {
    fail(ErrorKind::admissibility,
         "evaluate: profile does not vanish on the boundary of the Wulff ball "
         "(|V(" + std::to_string(bc.at) + ")| = " + std::to_string(bc.value) + ")",
         bc.value);
  }
}

double lpow(double v, double e) { return v == 0.0 ? 0.0 : std::pow(std::abs(v), e); }

// |v|^e times a weight given by its log; the two factors over- and underflow
// in opposite directions next to the boundary.
double weighted_pow(double v, double e, double log_w) {
  return v == 0.0 ? 0.0 : std::exp(e * std::log(std::abs(v)) + log_w);
}

}  // namespace

double moser_functional_bound(double R) {
  require(R > 0.0, ErrorKind::domain, "moser_functional_bound: requires R > 0");
  return 5.0 * std::numbers::pi * R * R;
}

VerificationReport evaluate_case(Family family, const NormSpec& spec,
                                 const TransplantMap& map, const RadialProfile& profile,
                                 const SharpConstants& c, bool extremal,
                                 const EvaluateOptions& options) {
  require(family != Family::trace, ErrorKind::input,
          "evaluate_case: trace takes a two-variable profile; use evaluate_trace");
  check_constants(family, c, map, spec);
  const int N = map.ambient_dim();
  const double p = map.p();
  const double R = map.R();
  const double tol = options.tol_1d;
  const double kappa = wulff_measure(spec).kappa;
  const double nk = N * kappa;
  const double hfac = gauge_factor(spec);
  const double gauge_rel = spec.closed_form() ? 0.0 : 1e-8;
  VerificationReport rep = base_report(family, spec, map, profile.description(), c, extremal);
  rep.extras["gauge_factor"] = hfac;
  rep.extras["prefactor"] = c.prefactor;

  const bool ball_family = family == Family::sobolev || family == Family::gn ||
                           family == Family::nash || family == Family::logsob;
  if (ball_family) {
    require(map.kind() == MapKind::interior, ErrorKind::input,
            "evaluate_case: " + to_string(family) + " needs an interior map");
    require(profile.domain() == Domain::ball && profile.dim() == N &&
                std::abs(profile.radius() - R) <= 1e-14 * R,
            ErrorKind::input,
            "evaluate_case: expected a profile on the Wulff ball of radius R in dimension N");
    require(family == Family::sobolev || family == Family::logsob || p == 2.0,
            ErrorKind::domain, "evaluate_case: " + to_string(family) + " needs p = 2");
    require_vanishing(profile);
  }
  auto log_w = [&](double s, double gap) {
    return log_weight_at(map, WeightKind::interior_weight, s, gap);
  };
  auto weighted = [&](double e, const RadialProfile& V, const std::string& what) {
    return ball_integral(
        V, nk,
        [&, e](double s, double gap) {
          return weighted_pow(V.value(s, gap), e, log_w(s, gap));
        },
        tol, what);
  };
  auto energy = [&](const RadialProfile& V, double e) {
    Integral I = ball_integral(
        V, nk * std::pow(hfac, e),
        [&, e](double s, double gap) { return lpow(V.derivative(s, gap), e); }, tol,
        "energy integral");
    I.rel += e * gauge_rel;
    return I;
  };

  switch (family) {
    case Family::sobolev: {
      const double ps = c.value("p_star");
      const double S = c.tilde("S");
      const Integral X = weighted(ps, profile, "weighted L^p* integral");
      const Integral Y = energy(profile, p);
      const double lhs = S * std::pow(X.value, p / ps);
      finish(rep, lhs, (p / ps) * X.rel + kConstantRel, Y.value, Y.rel, std::abs(Y.value));
      rep.extras["S_tilde"] = S;
      break;
    }
    case Family::gn: {
      const double q = c.p;
      const double theta = c.value("theta");
      const double A = c.tilde("A");
      const Integral X = weighted(2.0 * q, profile, "weighted L^2q integral");
      const Integral Y = energy(profile, 2.0);
      const Integral Z = weighted(q + 1.0, profile, "weighted L^(q+1) integral");
      const double lhs = std::pow(X.value, 1.0 / (2.0 * q));
      const double rhs = A * std::pow(Y.value, 0.5 * theta) *
                         std::pow(Z.value, (1.0 - theta) / (q + 1.0));
      finish(rep, lhs, X.rel / (2.0 * q), rhs,
             0.5 * theta * Y.rel + (1.0 - theta) / (q + 1.0) * Z.rel + kConstantRel,
             std::abs(rhs));
      rep.extras["theta"] = theta;
      rep.extras["A_tilde"] = A;
      break;
    }
    case Family::nash: {
      const double B = c.tilde("B");
      const Integral X = weighted(2.0, profile, "weighted L^2 integral");
      const Integral Y = energy(profile, 2.0);
      const Integral Z = weighted(1.0, profile, "weighted L^1 integral");
      const double lhs = std::pow(X.value, 1.0 + 2.0 / N);
      const double rhs = B * Y.value * std::pow(Z.value, 4.0 / N);
      finish(rep, lhs, (1.0 + 2.0 / N) * X.rel, rhs,
             Y.rel + (4.0 / N) * Z.rel + kConstantRel, std::abs(rhs));
      rep.extras["B_tilde"] = B;
      rep.extras["mu"] = c.value("mu");
      break;
    }
    case Family::logsob: {
      const double ratio = c.prefactor;
      const Integral M0 = weighted(p, profile, "mass integral");
      const double mass = ratio * M0.value;
      require(mass > 0.0 && std::isfinite(mass), ErrorKind::admissibility,
              "evaluate_case: logsob profile has zero or infinite mass");
      const double scale = std::pow(mass, -1.0 / p);
      const RadialProfile V = profile.scaled(scale);
      const Integral M = weighted(p, V, "mass integral after renormalisation");
      const double residual = std::abs(ratio * M.value - 1.0);
      const Integral J = ball_integral(
          V, nk,
          [&](double s, double gap) {
            const double v = V.value(s, gap);
            if (v == 0.0) return 0.0;
            const double la = p * std::log(std::abs(v));
            return la * std::exp(la + log_w(s, gap));
          },
          tol, "entropy integral");
      const Integral Y = energy(V, p);
      const double L = c.tilde("L");
      const double lhs = ratio * J.value;
      const double rhs = (N / p) * std::log(L * Y.value);
      // Absolute uncertainties: the log turns relative error into absolute.
      const double lhs_abs = std::abs(lhs) * J.rel + residual * (1.0 + std::abs(lhs));
      const double rhs_abs = (N / p) * (Y.rel + kConstantRel);
      const double denom = std::max({std::abs(lhs), std::abs(rhs), 1.0});
      finish(rep, lhs, 0.0, rhs, 0.0, denom);
      rep.error_budget += lhs_abs + rhs_abs;
      rep.pass = std::isfinite(rep.deficit) &&
                 inequality_pass(rep.deficit, rep.error_budget, rep.extremal);
      rep.extras["mass_scale"] = scale;
      rep.extras["mass_residual"] = residual;
      rep.extras["L_tilde"] = L;
      if (residual > 1e-10) {
        rep.notes.push_back("mass constraint residual above 1e-10");
        rep.pass = false;
      }
      rep.notes.push_back("profile renormalised to unit weighted mass");
      break;
    }
    case Family::poincare: {
      require(map.kind() == MapKind::exterior, ErrorKind::input,
              "evaluate_case: poincare needs an exterior map");
      require(profile.domain() == Domain::halfline && profile.dim() == N,
              ErrorKind::input, "evaluate_case: poincare expects a half-line profile in r");
      const double lambda = c.value("lambda1");
      const Integral X = halfline_integral(
          profile, nk,
          [&](double r) {
            return weighted_pow(profile.value(r), p,
                                log_weight_at(map, WeightKind::exterior_weight, r));
          },
          tol, "weighted L^p integral");
      Integral Y = halfline_integral(
          profile, nk * std::pow(hfac, p),
          [&](double r) { return lpow(profile.derivative(r), p); }, tol, "energy integral");
      Y.rel += p * gauge_rel;
      const double lhs = lambda * X.value;
      const double rhs = std::pow(R, p) * Y.value;
      finish(rep, lhs, X.rel + kShootingRel, rhs, Y.rel + kShootingRel, std::abs(rhs));
      rep.extras["lambda1"] = lambda;
      break;
    }
    case Family::trudinger_moser: {
      require(map.kind() == MapKind::planar, ErrorKind::input,
              "evaluate_case: trudinger_moser needs a planar map");
      require(profile.domain() == Domain::halfline && profile.dim() == N,
              ErrorKind::input,
              "evaluate_case: trudinger_moser expects a half-line profile in r");
      const double budget = c.value("energy_budget");
      Integral E = halfline_integral(
          profile, nk * hfac * hfac,
          [&](double r) {
            const double d = profile.derivative(r);
            return d * d;
          },
          tol, "energy integral");
      E.rel += 2.0 * gauge_rel;
      const double energy_err = std::abs(E.value) * E.rel + 16.0 * kEps * budget;
      if (E.value > budget + energy_err) {
        fail(ErrorKind::admissibility,
             "evaluate_case: energy " + std::to_string(E.value) +
                 " exceeds the budget " + std::to_string(budget),
             E.value);
      }
      // Integrated in x = r^(2-N), the exponent of the planar map, where the
      // Moser mass sits at x ~ 0 and x ~ k on unit scales instead of being
      // squeezed against r = k^(-1/(N-2)).
      std::vector<double> x_breaks;
      for (double b : profile.breakpoints()) x_breaks.push_back(std::pow(b, 2.0 - N));
      const double inv = -1.0 / (N - 2.0);
      const auto fr = named("functional integral", [&] {
        return quad::integrate_halfline(
            [&](double x) {
              if (x == 0.0) return 0.0;
              const double r = std::pow(x, inv);
              const double u = profile.value(r);
              // dr/dx = r^(N-1)/(N-2) in magnitude.
              const double log_jac = 2.0 * (N - 1.0) * std::log(r) - std::log(N - 2.0);
              return std::exp(4.0 * std::numbers::pi * u * u +
                              log_weight_at(map, WeightKind::planar_W, r) + log_jac);
            },
            tol, x_breaks);
      });
      const Integral F = take(fr, nk, tol, "functional integral");
      const double bound = moser_functional_bound(R);
      rep.lhs = E.value;
      rep.rhs = budget;
      rep.ratio = budget / E.value;
      rep.deficit = budget - E.value;
      rep.relative_deficit = rep.deficit / budget;
      rep.error_budget = energy_err;
      const double f_err = std::abs(F.value) * F.rel;
      rep.pass = std::isfinite(F.value) && F.value <= bound + f_err &&
                 inequality_pass(rep.deficit, rep.error_budget, rep.extremal);
      rep.extras["functional"] = F.value;
      rep.extras["functional_error"] = f_err;
      rep.extras["functional_bound"] = bound;
      rep.extras["energy_budget"] = budget;
      rep.notes.push_back(
          "lhs: energy, rhs: admissible budget; functional reported against the "
          "witness bound, no supremum value claimed");
      break;
    }
    case Family::trace:
      break;
  }
  return rep;
}

VerificationReport evaluate_trace(const NormSpec& spec, const TransplantMap& map,
                                  const TraceProfile& profile,
                                  const SharpConstants& c, bool extremal,
                                  const EvaluateOptions& options) {
  check_constants(Family::trace, c, map, spec);
  require(map.kind() == MapKind::trace, ErrorKind::input,
          "evaluate_trace: needs a trace map");
  require(profile.domain() == Domain::ball && profile.dim() == map.transplant_dim() &&
              std::abs(profile.radius() - map.R()) <= 1e-14 * map.R(),
          ErrorKind::input,
          "evaluate_trace: expected a profile on W_R^(N-1) x (0, inf)");
  const int n = map.transplant_dim();
  const double p = map.p();
  const double R = map.R();
  const double nk = n * wulff_measure(spec).kappa;
  const double hfac = gauge_factor(spec);
  const double gauge_rel = spec.closed_form() ? 0.0 : 1e-8;
  const double pl = c.value("p_lower_star");
  const double S = c.tilde("S_T");
  auto log_A = [&](double s, double gap) {
    return log_weight_at(map, WeightKind::trace_A_R, s, gap);
  };

  VerificationReport rep =
      base_report(Family::trace, spec, map, profile.description(), c, extremal);
  rep.params["n"] = n;

  const auto xb = quad::integrate_ball(
      [&](double s, double gap) {
        return weighted_pow(profile.value(s, gap, 0.0), pl,
                            -0.5 * p * log_A(s, gap) + (n - 1.0) * std::log(s));
      },
      R, options.tol_1d);
  const Integral X = take(xb, nk, options.tol_1d, "boundary integral");
  const auto yb = quad::integrate_2d(
      [&](double s, double gap, double t) {
        // (|V_s|^2 H^2 A + V_t^2)^(p/2) A^(-p/2) = (|V_s|^2 H^2 + V_t^2 / A)^(p/2)
        const double la = log_A(s, gap);
        const double vs = profile.d_ds(s, gap, t) * hfac;
        const double vt = profile.d_dt(s, gap, t);
        const double a = vs == 0.0 ? -kInf : 2.0 * std::log(std::abs(vs));
        const double b = vt == 0.0 ? -kInf : 2.0 * std::log(std::abs(vt)) - la;
        if (a == -kInf && b == -kInf) return 0.0;
        const double m = std::max(a, b);
        const double g = m + std::log1p(std::exp(std::min(a, b) - m));
        return std::exp(0.5 * p * g + (n - 1.0) * std::log(s));
      },
      R, options.tol_2d);
  Integral Y = take(yb, nk, options.tol_2d, "two-dimensional energy integral");
  Y.rel += p * gauge_rel;
  const double lhs = S * std::pow(X.value, p / pl);
  finish(rep, lhs, (p / pl) * X.rel + kConstantRel, Y.value, Y.rel, std::abs(Y.value));
  rep.extras["S_T_tilde"] = S;
  rep.extras["gauge_factor"] = hfac;
  rep.extras["prefactor"] = c.prefactor;
  rep.notes.push_back("equality at the extremal family only; uniqueness not asserted");
  return rep;
}

namespace {

double sup_abs(const RadialProfile& V) {
  double sup = 0.0;
  const int n = 400;
  for (int i = 1; i < n; ++i) {
    const double x = V.domain() == Domain::ball ? V.radius() * i / n
                                                : std::expm1(12.0 * i / n);
    sup = std::max(sup, std::abs(V.value(x)));
  }
  return sup;
}

RadialProfile bump(const RadialProfile& base, int j, double amplitude) {
  if (base.domain() == Domain::ball) {
    const double R = base.radius();
    const double peak = std::pow(j / (j + 1.0), j) / (j + 1.0);
    const double c = amplitude / peak;
    return RadialProfile(
        Domain::ball, R, base.dim(),
        [=](double s, double gap) { return c * std::pow(s / R, j) * (gap / R); },
        [=](double s, double gap) {
          const double x = s / R;
          return c * (j * std::pow(x, j - 1) * (gap / R) - std::pow(x, j)) / R;
        },
        "bump" + std::to_string(j));
  }
  const double peak = std::pow(j, j) * std::exp(-static_cast<double>(j));
  const double c = amplitude / peak;
  return RadialProfile(
      Domain::halfline, kInf, base.dim(),
      [=](double r, double) { return c * std::pow(r, j) * std::exp(-r); },
      [=](double r, double) {
        return c * (j * std::pow(r, j - 1) - std::pow(r, j)) * std::exp(-r);
      },
      "bump" + std::to_string(j));
}

}  // namespace

PerturbationResult perturbation_check(Family family, const NormSpec& spec,
                                      const TransplantMap& map, const RadialProfile& base,
                                      double delta, int directions,
                                      const SharpConstants& constants,
                                      const EvaluateOptions& options) {
  require(directions >= 1, ErrorKind::domain, "perturbation_check: requires n >= 1");
  require(std::isfinite(delta), ErrorKind::domain, "perturbation_check: delta must be finite");
  const double amplitude = sup_abs(base);
  PerturbationResult out;
  out.min_deficit = kInf;
  for (int j = 1; j <= directions; ++j) {
    const RadialProfile V = base.perturbed(delta, bump(base, j, amplitude));
    VerificationReport rep = evaluate_case(family, spec, map, V, constants, false, options);
    rep.extras["delta"] = delta;
    rep.extras["direction"] = j;
    if (rep.deficit < out.min_deficit) {
      out.min_deficit = rep.deficit;
      out.budget_at_min = rep.error_budget;
    }
    out.reports.push_back(std::move(rep));
  }
  return out;
}

}  // namespace finsler
