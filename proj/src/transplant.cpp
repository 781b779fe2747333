#include "finsler/transplant.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "finsler/error.hpp"
#include "finsler/quadrature.hpp"
#include "finsler/specfun.hpp"

namespace finsler {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(s / R) from s and the exact gap R - s.
double log_ratio(double s, double gap, double R) {
  return gap < 0.5 * R ? std::log1p(-gap / R) : std::log(s / R);
}

void check_r(double r, const char* where) {
  if (!(r > 0.0) || std::isinf(r)) {
    fail(ErrorKind::domain, std::string(where) + ": r must be positive and finite");
  }
}

void check_s(const TransplantMap& map, double s, double gap, const char* where) {
  // s may round to R while the exact gap is still positive.
  if (!(s > 0.0) || !(gap > 0.0) || !(s <= map.R())) {
    fail(ErrorKind::domain, std::string(where) + ": s = " + std::to_string(s) +
                                " outside (0, R)");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::interior: return "interior";
    case MapKind::exterior: return "exterior";
    case MapKind::trace: return "trace";
    case MapKind::planar: return "planar";
  }
  return "unknown";
}

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::interior_weight: return "interior_weight";
    case WeightKind::exterior_weight: return "exterior_weight";
    case WeightKind::trace_A_R: return "trace_A_R";
    case WeightKind::planar_W: return "planar_W";
  }
  return "unknown";
}

TransplantMap::TransplantMap(MapKind kind, int N, int n, double p, double R,
                             double kappa)
    : kind_(kind), N_(N), n_(n), p_(p), R_(R), kappa_(kappa) {
  a_ = kind == MapKind::planar ? 2.0 - N : (p - n) / (p - 1.0);
}

TransplantMap TransplantMap::interior(int N, double p, double R) {
  require(N >= 2, ErrorKind::domain, "interior map: requires N >= 2");
  require(p > 1.0 && p < N, ErrorKind::domain, "interior map: requires 1 < p < N");
  require(R > 0.0, ErrorKind::domain, "interior map: requires R > 0");
  return TransplantMap(MapKind::interior, N, N, p, R, std::nan(""));
}

TransplantMap TransplantMap::exterior(int N, double p, double R) {
  require(N >= 2, ErrorKind::domain, "exterior map: requires N >= 2");
  require(p > 1.0 && p < N, ErrorKind::domain, "exterior map: requires 1 < p < N");
  require(R > 0.0, ErrorKind::domain, "exterior map: requires R > 0");
  return TransplantMap(MapKind::exterior, N, N, p, R, std::nan(""));
}

TransplantMap TransplantMap::trace(int N, double p, double R) {
  require(N >= 3, ErrorKind::domain, "trace map: requires N >= 3");
  require(p > 1.0 && p < N - 1, ErrorKind::domain,
          "trace map: requires 1 < p < N - 1");
  require(R > 0.0, ErrorKind::domain, "trace map: requires R > 0");
  return TransplantMap(MapKind::trace, N, N - 1, p, R, std::nan(""));
}

TransplantMap TransplantMap::planar(const NormSpec& spec, double R) {
  const int N = spec.dim();
  require(N >= 3, ErrorKind::domain, "planar map: requires N >= 3");
  require(R > 0.0, ErrorKind::domain, "planar map: requires R > 0");
  return TransplantMap(MapKind::planar, N, N, 2.0, R, wulff_measure(spec).kappa);
}

std::string TransplantMap::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "(N=" << N_;
  if (kind_ == MapKind::trace) os << ", n=" << n_;
  os << ", p=" << fmt(p_) << ", R=" << fmt(R_) << ")";
  return os.str();
}

double map_forward(const TransplantMap& map, double r) {
  check_r(r, "map_forward");
  const double R = map.R();
  if (map.kind() == MapKind::planar) return R * std::exp(-std::pow(r, map.exponent()));
  const double a = map.exponent();
  const double q = std::exp(a * std::log(r / R));
  return R * std::exp(std::log1p(q) / a);
}

double map_forward_gap(const TransplantMap& map, double r) {
  check_r(r, "map_forward_gap");
  const double R = map.R();
  if (map.kind() == MapKind::planar) return -R * std::expm1(-std::pow(r, map.exponent()));
  const double a = map.exponent();
  const double q = std::exp(a * std::log(r / R));
  return -R * std::expm1(std::log1p(q) / a);
}

double map_inverse(const TransplantMap& map, double s) {
  return map_inverse(map, s, map.R() - s);
}

double map_inverse(const TransplantMap& map, double s, double gap) {
  check_s(map, s, gap, "map_inverse");
  const double R = map.R();
  const double L = log_ratio(s, gap, R);
  if (map.kind() == MapKind::planar) return std::pow(-L, 1.0 / map.exponent());
  const double a = map.exponent();
  return R * std::exp(std::log(std::expm1(a * L)) / a);
}

double map_jacobian(const TransplantMap& map, double r) {
  check_r(r, "map_jacobian");
  const double s = map_forward(map, r);
  if (map.kind() == MapKind::planar) {
    const int N = map.ambient_dim();
    return (N - 2.0) * s * std::pow(r, 1.0 - N);
  }
  const int n = map.transplant_dim();
  return std::pow(s / r, (n - 1.0) / (map.p() - 1.0));
}

double map_log_jacobian(const TransplantMap& map, double r) {
  check_r(r, "map_log_jacobian");
  const double R = map.R();
  const double log_r = std::log(r);
  if (map.kind() == MapKind::planar) {
    const int N = map.ambient_dim();
    const double log_s = std::log(R) - std::pow(r, map.exponent());
    return std::log(N - 2.0) + log_s + (1.0 - N) * log_r;
  }
  const double a = map.exponent();
  const double log_s = std::log(R) + std::log1p(std::exp(a * (log_r - std::log(R)))) / a;
  const int n = map.transplant_dim();
  return (n - 1.0) / (map.p() - 1.0) * (log_s - log_r);
}

double chain_quotient(const TransplantMap& map, double dU, double r) {
  if (dU == 0.0) return 0.0;
  return std::copysign(std::exp(std::log(std::abs(dU)) - map_log_jacobian(map, r)), dU);
}

WeightKind natural_weight(const TransplantMap& map) {
  switch (map.kind()) {
    case MapKind::interior: return WeightKind::interior_weight;
    case MapKind::exterior: return WeightKind::exterior_weight;
    case MapKind::trace: return WeightKind::trace_A_R;
    case MapKind::planar: return WeightKind::planar_W;
  }
  return WeightKind::interior_weight;
}

double weight_at(const TransplantMap& map, WeightKind kind, double point) {
  const bool ball = kind == WeightKind::interior_weight || kind == WeightKind::trace_A_R;
  return weight_at(map, kind, point, ball ? map.R() - point : kInf);
}

double weight_at(const TransplantMap& map, WeightKind kind, double point,
                 double gap) {
  return std::exp(log_weight_at(map, kind, point, gap));
}

double log_weight_at(const TransplantMap& map, WeightKind kind, double point) {
  const bool ball = kind == WeightKind::interior_weight || kind == WeightKind::trace_A_R;
  return log_weight_at(map, kind, point, ball ? map.R() - point : kInf);
}

double log_weight_at(const TransplantMap& map, WeightKind kind, double point,
                     double gap) {
  const double p = map.p();
  const double R = map.R();
  const int n = map.transplant_dim();
  switch (kind) {
    case WeightKind::interior_weight:
    case WeightKind::trace_A_R: {
      const bool ok = kind == WeightKind::trace_A_R
                          ? map.kind() == MapKind::trace
                          : (map.kind() == MapKind::interior || map.kind() == MapKind::trace);
      require(ok, ErrorKind::input,
              "weight_at: " + to_string(kind) + " does not belong to a " +
                  to_string(map.kind()) + " map");
      check_s(map, point, gap, "weight_at");
      const double k = (n - p) / (p - 1.0);
      // 1 - (s/R)^k without cancellation next to s = R.
      const double base = -std::expm1(k * log_ratio(point, gap, R));
      const double e = kind == WeightKind::interior_weight
                           ? -p * (n - 1.0) / (n - p)
                           : 2.0 * (n - 1.0) / (n - p);
      return e * std::log(base);
    }
    case WeightKind::exterior_weight: {
      require(map.kind() == MapKind::exterior, ErrorKind::input,
              "weight_at: exterior_weight needs an exterior map");
      check_r(point, "weight_at");
      const double k = (n - p) / (p - 1.0);
      return -p * (n - 1.0) / (n - p) * std::log1p(std::exp(k * std::log(point / R)));
    }
    case WeightKind::planar_W: {
      require(map.kind() == MapKind::planar, ErrorKind::input,
              "weight_at: planar_W needs a planar map");
      check_r(point, "weight_at");
      const int N = map.ambient_dim();
      return std::log(2.0 * std::numbers::pi * (N - 2.0) / (N * map.kappa())) +
             2.0 * std::log(R) - 2.0 * (N - 1.0) * std::log(point) -
             2.0 * std::pow(point, 2.0 - N);
    }
  }
  return std::nan("");
}

RadialProfile transplant_profile(const TransplantMap& map,
                                 const RadialProfile& profile) {
  const int half_dim = map.transplant_dim();
  const int ball_dim = map.kind() == MapKind::planar ? 2 : map.transplant_dim();
  const std::string tag = "transplant[" + map.describe() + "](" +
                          profile.description() + ")";
  if (profile.domain() == Domain::halfline) {
    require(profile.dim() == half_dim, ErrorKind::input,
            "transplant_profile: half-line profile has the wrong dimension");
    const RadialProfile U = profile;
    const TransplantMap m = map;
    RadialProfile V(
        Domain::ball, map.R(), ball_dim,
        [U, m](double s, double gap) {
          const double r = map_inverse(m, s, gap);
          return std::isinf(r) ? 0.0 : U.value(r);
        },
        [U, m](double s, double gap) {
          const double r = map_inverse(m, s, gap);
          if (std::isinf(r)) return 0.0;
          return chain_quotient(m, U.derivative(r), r);
        },
        tag);
    std::vector<double> points;
    for (double b : profile.breakpoints()) {
      if (b > 0.0 && std::isfinite(b)) points.push_back(map_forward(map, b));
    }
    return V.with_breakpoints(points);
  }
  require(profile.dim() == ball_dim, ErrorKind::input,
          "transplant_profile: ball profile has the wrong dimension");
  require(std::abs(profile.radius() - map.R()) <= 1e-14 * map.R(), ErrorKind::input,
          "transplant_profile: ball radius differs from the map's R");
  const RadialProfile V = profile;
  const TransplantMap m = map;
  RadialProfile U(
      Domain::halfline, kInf, half_dim,
      [V, m](double r, double) {
        return V.value(map_forward(m, r), map_forward_gap(m, r));
      },
      [V, m](double r, double) {
        return V.derivative(map_forward(m, r), map_forward_gap(m, r)) *
               map_jacobian(m, r);
      },
      tag);
  std::vector<double> points;
  for (double b : profile.breakpoints()) {
    if (b > 0.0 && b < map.R()) points.push_back(map_inverse(map, b));
  }
  return U.with_breakpoints(points);
}

TraceProfile transplant_profile(const TransplantMap& map,
                                const TraceProfile& profile) {
  require(map.kind() == MapKind::trace, ErrorKind::input,
          "transplant_profile: two-variable profiles need a trace map");
  require(profile.domain() == Domain::halfline &&
              profile.dim() == map.transplant_dim(),
          ErrorKind::input,
          "transplant_profile: expected a half-line profile in dimension N - 1");
  const TraceProfile U = profile;
  const TransplantMap m = map;
  return TraceProfile(
      Domain::ball, map.R(), map.transplant_dim(),
      [U, m](double s, double gap, double t) {
        const double r = map_inverse(m, s, gap);
        return std::isinf(r) ? 0.0 : U.value(r, kInf, t);
      },
      [U, m](double s, double gap, double t) {
        const double r = map_inverse(m, s, gap);
        if (std::isinf(r)) return 0.0;
        return chain_quotient(m, U.d_ds(r, kInf, t), r);
      },
      [U, m](double s, double gap, double t) {
        const double r = map_inverse(m, s, gap);
        return std::isinf(r) ? 0.0 : U.d_dt(r, kInf, t);
      },
      "transplant[" + map.describe() + "](" + profile.description() + ")");
}

double gauge_factor(const NormSpec& spec) {
  std::vector<double> theta(spec.dim());
  for (int i = 0; i < spec.dim(); ++i) theta[i] = (i % 2 ? -1.0 : 1.0) * (1.0 + 0.37 * i);
  return norm_eval(spec, dual_grad(spec, theta));
}

namespace {

struct Side {
  double value = 0.0;
  double error = 0.0;
};

Side checked(const quad::QuadResult& r, double scale, const char* side) {
  if (!r.converged) {
    fail(ErrorKind::precision,
         std::string("equivalence_check: ") + side +
             " did not reach the requested tolerance",
         scale * r.value);
  }
  return {scale * r.value, std::abs(scale) * r.error_estimate};
}

VerificationReport assemble(const TransplantMap& map, const NormSpec& spec,
                            const std::string& profile, const Observable& obs,
                            Side lhs, Side rhs, double hfac, double prefactor,
                            double threshold) {
  VerificationReport rep;
  rep.family = "transplant";
  rep.label = to_string(map.kind()) + "-" + obs.label;
  rep.params = {{"N", map.ambient_dim()},
                {"n", map.transplant_dim()},
                {"p", map.p()},
                {"R", map.R()}};
  rep.norm = describe(spec);
  rep.profile = profile;
  rep.lhs = lhs.value;
  rep.rhs = rhs.value;
  rep.ratio = rhs.value / lhs.value;
  rep.deficit = rhs.value - lhs.value;
  rep.relative_deficit = rep.deficit / std::abs(rhs.value);
  // The numerical gauge factor of a generic norm is good to about 1e-9.
  const double gauge_unc = spec.closed_form() ? 0.0 : 1e-8 * std::abs(rhs.value);
  rep.error_budget = lhs.error + rhs.error + gauge_unc +
                     4.0 * std::numeric_limits<double>::epsilon() *
                         (std::abs(lhs.value) + std::abs(rhs.value));
  const double mismatch = std::abs(rep.deficit) / std::abs(rhs.value);
  rep.pass = std::isfinite(mismatch) && mismatch <= threshold;
  rep.extras = {{"relative_mismatch", mismatch},
                {"threshold", threshold},
                {"lhs_error", lhs.error},
                {"rhs_error", rhs.error},
                {"gauge_factor", hfac},
                {"prefactor", prefactor},
                {"within_10x_error",
                 std::abs(rep.deficit) <= 10.0 * rep.error_budget ? 1.0 : 0.0}};
  rep.notes.push_back("lhs: Euclidean side, rhs: gauge side");
  return rep;
}

}  // namespace

namespace {

double log_abs(double x) {
  return x == 0.0 ? -kInf : std::log(std::abs(x));
}

// log(e^a + e^b) for a, b possibly -inf.
double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// sign(f) e^(log|f| + extra), 0 when f is 0: products of a profile value with
// a weight or a Jacobian that over- and underflow in opposite directions.
double scaled(double f, double extra) {
  if (f == 0.0) return 0.0;
  return std::copysign(std::exp(std::log(std::abs(f)) + extra), f);
}

// log|d/ds U(r(s))| on the ball side of a map, -inf where it vanishes.
double log_abs_transplanted(const TransplantMap& m, double dU, double r) {
  if (dU == 0.0) return -kInf;
  return std::log(std::abs(dU)) - map_log_jacobian(m, r);
}

}  // namespace

VerificationReport equivalence_check(const TransplantMap& map,
                                     const NormSpec& spec,
                                     const RadialProfile& profile,
                                     const Observable& observable,
                                     const EquivalenceOptions& options) {
  require(map.kind() != MapKind::trace, ErrorKind::input,
          "equivalence_check: trace maps take a two-variable profile");
  require(profile.domain() == Domain::halfline, ErrorKind::input,
          "equivalence_check: profile must be a half-line profile in r");
  const int N = map.ambient_dim();
  require(spec.dim() == N, ErrorKind::input,
          "equivalence_check: norm dimension differs from the map's N");
  require(observable.kind == Observable::Kind::energy || observable.F,
          ErrorKind::input, "equivalence_check: functional without F");

  const double p = map.p();
  const double R = map.R();
  const double omega = specfun::sphere_area(N);
  const double kappa = wulff_measure(spec).kappa;
  const double hfac = gauge_factor(spec);
  const double log_hfac_p = p * std::log(hfac);
  const bool energy = observable.kind == Observable::Kind::energy;
  const auto& F = observable.F;
  const double tol = options.tol_1d;
  const auto& rb = profile.breakpoints();
  std::vector<double> sb;
  for (double b : rb) {
    if (b > 0.0 && std::isfinite(b)) sb.push_back(map_forward(map, b));
  }
  const int ball_dim = map.kind() == MapKind::planar ? 2 : N;
  const double ball_pow = map.kind() == MapKind::planar ? 2.0 : p;

  // Ball side in s: the profile composed with r(s), derivatives by the chain
  // rule in log form.
  auto ball_energy = [&](double s, double gap, double log_factor) {
    const double r = map_inverse(map, s, gap);
    if (std::isinf(r)) return 0.0;
    const double L = log_abs_transplanted(map, profile.derivative(r), r);
    if (L == -kInf) return 0.0;
    return std::exp(ball_pow * L + log_factor + (ball_dim - 1.0) * std::log(s));
  };
  auto ball_value = [&](double s, double gap) {
    const double r = map_inverse(map, s, gap);
    return std::isinf(r) ? 0.0 : profile.value(r);
  };
  // Half-line side in r.
  auto line_energy = [&](double r, double log_factor) {
    const double d = profile.derivative(r);
    if (d == 0.0) return 0.0;
    return std::exp(p * std::log(std::abs(d)) + log_factor + (N - 1.0) * std::log(r));
  };

  Side lhs;
  Side rhs;
  double prefactor = 0.0;
  switch (map.kind()) {
    case MapKind::interior: {
      // Euclidean R^N in r; Wulff ball W_R in s.
      prefactor = omega / (N * kappa);
      const auto l = energy
          ? quad::integrate_halfline([&](double r) { return line_energy(r, 0.0); }, tol, rb)
          : quad::integrate_halfline([&](double r) {
              return scaled(F(profile.value(r)), (N - 1.0) * std::log(r));
            }, tol, rb);
      lhs = checked(l, omega, "lhs (Euclidean side)");
      const auto r = energy
          ? quad::integrate_ball([&](double s, double gap) {
              return ball_energy(s, gap, log_hfac_p);
            }, R, tol, sb)
          : quad::integrate_ball([&](double s, double gap) {
              return scaled(F(ball_value(s, gap)),
                            log_weight_at(map, WeightKind::interior_weight, s, gap) +
                                (N - 1.0) * std::log(s));
            }, R, tol, sb);
      rhs = checked(r, prefactor * N * kappa, "rhs (gauge side)");
      break;
    }
    case MapKind::exterior: {
      // Euclidean ball B_R in s; gauge side R^N in r = H0(x).
      prefactor = omega / (N * kappa);
      const auto l = energy
          ? quad::integrate_ball([&](double s, double gap) {
              return ball_energy(s, gap, 0.0);
            }, R, tol, sb)
          : quad::integrate_ball([&](double s, double gap) {
              return scaled(F(ball_value(s, gap)), (N - 1.0) * std::log(s));
            }, R, tol, sb);
      lhs = checked(l, omega, "lhs (Euclidean side)");
      const auto r = energy
          ? quad::integrate_halfline([&](double x) { return line_energy(x, log_hfac_p); },
                                     tol, rb)
          : quad::integrate_halfline([&](double x) {
              return scaled(F(profile.value(x)),
                            log_weight_at(map, WeightKind::exterior_weight, x) +
                                (N - 1.0) * std::log(x));
            }, tol, rb);
      rhs = checked(r, prefactor * N * kappa, "rhs (gauge side)");
      break;
    }
    case MapKind::planar: {
      // Euclidean 2-disk B_R in s; gauge side R^N in r = H0(x). The disk is
      // integrated in sigma = log(R/s): profiles with U'(0) != 0 give a
      // density 1/(s log^4(R/s)) at s = 0, whose mass below the smallest
      // double is still ~1e-9 of the total. In sigma, r = sigma^(1/(2-N)).
      const double two_pi = 2.0 * std::numbers::pi;
      const double log_R = std::log(R);
      std::vector<double> sigma_breaks;
      for (double b : rb) {
        if (b > 0.0 && std::isfinite(b)) sigma_breaks.push_back(std::pow(b, 2.0 - N));
      }
      const double inv = 1.0 / (2.0 - N);
      // ds = s dsigma, so s ds = s^2 dsigma, and with ds/dr = (N-2) s r^(1-N)
      // the energy density |V'|^2 s^2 is (|U'| r^(N-1) / (N-2))^2, free of the
      // cancellation between log s and log(ds/dr).
      const auto l = energy
          ? quad::integrate_halfline([&](double sigma) {
              if (sigma == 0.0) return 0.0;
              const double r = std::pow(sigma, inv);
              const double d = profile.derivative(r);
              if (d == 0.0) return 0.0;
              return std::exp(2.0 * (std::log(std::abs(d)) + (N - 1.0) * std::log(r) -
                                     std::log(N - 2.0)));
            }, tol, sigma_breaks)
          : quad::integrate_halfline([&](double sigma) {
              if (sigma == 0.0) return 0.0;
              const double r = std::pow(sigma, inv);
              return scaled(F(profile.value(r)), 2.0 * (log_R - sigma));
            }, tol, sigma_breaks);
      lhs = checked(l, two_pi, "lhs (Euclidean side)");
      if (energy) {
        prefactor = two_pi / ((N - 2.0) * N * kappa);
        const auto r = quad::integrate_halfline(
            [&](double x) { return line_energy(x, 2.0 * std::log(hfac)); }, tol, rb);
        rhs = checked(r, prefactor * N * kappa, "rhs (gauge side)");
      } else {
        prefactor = 1.0;
        const auto r = quad::integrate_halfline([&](double x) {
          return scaled(F(profile.value(x)),
                        log_weight_at(map, WeightKind::planar_W, x) + (N - 1.0) * std::log(x));
        }, tol, rb);
        rhs = checked(r, N * kappa, "rhs (gauge side)");
      }
      break;
    }
    case MapKind::trace:
      break;
  }
  return assemble(map, spec, profile.description(), observable, lhs, rhs, hfac,
                  prefactor, options.threshold);
}

VerificationReport equivalence_check(const TransplantMap& map,
                                     const NormSpec& spec,
                                     const TraceProfile& profile,
                                     const Observable& observable,
                                     const EquivalenceOptions& options) {
  require(map.kind() == MapKind::trace, ErrorKind::input,
          "equivalence_check: two-variable profiles need a trace map");
  const int n = map.transplant_dim();
  require(spec.dim() == n, ErrorKind::input,
          "equivalence_check: trace identity needs a norm on R^(N-1)");
  require(observable.kind == Observable::Kind::energy || observable.F,
          ErrorKind::input, "equivalence_check: functional without F");
  const double p = map.p();
  const double R = map.R();
  const double omega = specfun::sphere_area(n);
  const double kappa = wulff_measure(spec).kappa;
  const double prefactor = omega / (n * kappa);
  const double hfac = gauge_factor(spec);
  auto log_A = [&](double s, double gap) {
    return log_weight_at(map, WeightKind::trace_A_R, s, gap);
  };

  Side lhs;
  Side rhs;
  if (observable.kind == Observable::Kind::energy) {
    const auto l = quad::integrate_2d(
        [&](double r, double, double t) {
          const double ur = profile.d_ds(r, kInf, t);
          const double ut = profile.d_dt(r, kInf, t);
          const double g = log_add(2.0 * log_abs(ur), 2.0 * log_abs(ut));
          if (g == -kInf) return 0.0;
          return std::exp(0.5 * p * g + (n - 1.0) * std::log(r));
        },
        kInf, options.tol_2d);
    lhs = checked(l, omega, "lhs (Euclidean side)");
    // (|V_s|^2 H^2 A + V_t^2)^(p/2) A^(-p/2) = (|V_s|^2 H^2 + V_t^2 / A)^(p/2).
    const auto r = quad::integrate_2d(
        [&](double s, double gap, double t) {
          const double rr = map_inverse(map, s, gap);
          if (std::isinf(rr)) return 0.0;
          const double la = log_A(s, gap);
          const double ls = log_abs_transplanted(map, profile.d_ds(rr, kInf, t), rr);
          const double lt = log_abs(profile.d_dt(rr, kInf, t));
          const double g = log_add(2.0 * (ls + std::log(hfac)), 2.0 * lt - la);
          if (g == -kInf) return 0.0;
          return std::exp(0.5 * p * g + (n - 1.0) * std::log(s));
        },
        R, options.tol_2d);
    rhs = checked(r, prefactor * n * kappa, "rhs (gauge side)");
  } else {
    const auto& F = observable.F;
    const auto l = quad::integrate_halfline(
        [&](double r) { return scaled(F(profile.value(r, kInf, 0.0)), (n - 1.0) * std::log(r)); },
        options.tol_1d);
    lhs = checked(l, omega, "lhs (Euclidean side)");
    const auto r = quad::integrate_ball(
        [&](double s, double gap) {
          const double rr = map_inverse(map, s, gap);
          const double v = std::isinf(rr) ? 0.0 : profile.value(rr, kInf, 0.0);
          return scaled(F(v), -0.5 * p * log_A(s, gap) + (n - 1.0) * std::log(s));
        },
        R, options.tol_1d);
    rhs = checked(r, prefactor * n * kappa, "rhs (gauge side)");
  }
  return assemble(map, spec, profile.description(), observable, lhs, rhs, hfac,
                  prefactor, options.threshold);
}

}  // namespace finsler
