#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "finsler/error.hpp"
#include "finsler/inequalities.hpp"
#include "finsler/specfun.hpp"

namespace finsler {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void require_map(const TransplantMap& map, MapKind kind, const char* family) {
  if (map.kind() != kind) {
    fail(ErrorKind::input, std::string(family) + " extremal needs a " +
                               to_string(kind) + " map, got " + to_string(map.kind()));
  }
}

// The radial profile U(r) on the Euclidean side composed with r(s).
RadialProfile on_ball(const TransplantMap& map, std::function<double(double)> U,
                      std::function<double(double)> dU, std::string description,
                      std::vector<double> r_breakpoints = {}) {
  const TransplantMap m = map;
  RadialProfile V(
      Domain::ball, map.R(), map.transplant_dim(),
      [m, U](double s, double gap) {
        const double r = map_inverse(m, s, gap);
        return std::isinf(r) ? U(kInf) : U(r);
      },
      [m, dU](double s, double gap) {
        const double r = map_inverse(m, s, gap);
        if (std::isinf(r)) return 0.0;
        return chain_quotient(m, dU(r), r);
      },
      std::move(description));
  std::vector<double> points;
  for (double b : r_breakpoints) points.push_back(map_forward(map, b));
  return V.with_breakpoints(points);
}

}  // namespace

RadialProfile extremal_profile(Family family, const ExtremalSpec& e,
                               const TransplantMap& map) {
  const int N = map.transplant_dim();
  const double p = map.p();
  switch (family) {
    case Family::sobolev: {
      require_map(map, MapKind::interior, "sobolev");
      require(e.a > 0.0 && e.b > 0.0, ErrorKind::domain, "sobolev extremal: requires a, b > 0");
      const double pp = p / (p - 1.0);
      const double expo = -(N - p) / p;
      const double a = e.a, b = e.b, C = e.C;
      return on_ball(
          map,
          [=](double r) { return C * std::pow(a + b * std::pow(r, pp), expo); },
          [=](double r) {
            return C * expo * std::pow(a + b * std::pow(r, pp), expo - 1.0) * b * pp *
                   std::pow(r, pp - 1.0);
          },
          "sobolev extremal(a=" + num(a) + ", b=" + num(b) + ", C=" + num(C) + ")");
    }
    case Family::gn: {
      require_map(map, MapKind::interior, "gn");
      require(p == 2.0, ErrorKind::domain, "gn extremal: requires p = 2");
      require(e.sigma > 0.0 && e.q > 1.0, ErrorKind::domain,
              "gn extremal: requires sigma > 0, q > 1");
      const double s2 = e.sigma * e.sigma, k = 1.0 / (e.q - 1.0), C = e.C;
      return on_ball(
          map, [=](double r) { return C * std::pow(s2 + r * r, -k); },
          [=](double r) { return -C * k * std::pow(s2 + r * r, -k - 1.0) * 2.0 * r; },
          "gn extremal(q=" + num(e.q) + ", sigma=" + num(e.sigma) + ", C=" + num(C) + ")");
    }
    case Family::nash: {
      require_map(map, MapKind::interior, "nash");
      require(p == 2.0, ErrorKind::domain, "nash extremal: requires p = 2");
      require(e.lambda > 0.0, ErrorKind::domain, "nash extremal: requires lambda > 0");
      const double nu = 0.5 * (N - 2.0);
      const double mu = std::isnan(e.mu) ? specfun::bessel_first_zero(0.5 * N).value : e.mu;
      const double u0 = std::exp(nu * std::log(0.5 * mu) - specfun::log_gamma(nu + 1.0));
      // U(t) = t^-nu J_nu(mu t), U'(t) = -mu t^-nu J_{nu+1}(mu t).
      auto U = [=](double t) {
        const double x = mu * t;
        if (x < 1e-8) return u0 * (1.0 - x * x / (4.0 * (nu + 1.0)));
        return std::pow(t, -nu) * specfun::bessel_j(nu, x);
      };
      auto dU = [=](double t) {
        const double x = mu * t;
        if (x < 1e-8) return -u0 * mu * x / (2.0 * (nu + 1.0));
        return -mu * std::pow(t, -nu) * specfun::bessel_j(nu + 1.0, x);
      };
      const double u1 = U(1.0);
      const double lam = e.lambda, C = e.C;
      return on_ball(
          map, [=](double r) { return lam * r < 1.0 ? C * (U(lam * r) - u1) : 0.0; },
          [=](double r) { return lam * r < 1.0 ? C * lam * dU(lam * r) : 0.0; },
          "nash extremal(lambda=" + num(lam) + ", C=" + num(C) + ", mu=" + num(mu) + ")",
          {1.0 / lam});
    }
    case Family::logsob: {
      require_map(map, MapKind::interior, "logsob");
      require(e.sigma > 0.0, ErrorKind::domain, "logsob extremal: requires sigma > 0");
      const double pp = p / (p - 1.0);
      const double C = logsob_normaliser(N, p, e.sigma), sigma = e.sigma;
      return on_ball(
          map, [=](double r) { return C * std::exp(-std::pow(r, pp) / sigma); },
          [=](double r) {
            return -C * std::exp(-std::pow(r, pp) / sigma) * pp * std::pow(r, pp - 1.0) /
                   sigma;
          },
          "logsob extremal(sigma=" + num(sigma) + ", C(N,p)=" + num(C) + ")");
    }
    case Family::poincare: {
      require_map(map, MapKind::exterior, "poincare");
      const RadialProfile phi = plap_eigenfunction(N, p, map.R()).scaled(e.C);
      return transplant_profile(map, phi);
    }
    case Family::trace:
      fail(ErrorKind::input, "trace extremals are two-variable; use trace_extremal");
    case Family::trudinger_moser:
      fail(ErrorKind::domain,
           "the Trudinger-Moser maximiser is not constructed; use moser_profile");
  }
  fail(ErrorKind::input, "extremal_profile: unknown family");
}

TraceProfile trace_extremal(const ExtremalSpec& e, const TransplantMap& map) {
  require_map(map, MapKind::trace, "trace");
  require(e.eps > 0.0, ErrorKind::domain, "trace extremal: requires eps > 0");
  const int N = map.ambient_dim();
  const double p = map.p();
  const double k = (N - p) / (2.0 * (p - 1.0));
  const double num2 = std::pow(e.eps, 2.0 / p);
  const double eps = e.eps, C = e.C;
  const TransplantMap m = map;
  // log((eps + t)^2 + r^2) without overflow for r or t beyond 1e154.
  auto log_D = [=](double r, double t) {
    const double a = eps + t;
    const double hi = std::max(a, r), lo = std::min(a, r);
    const double q = lo / hi;
    return 2.0 * std::log(hi) + std::log1p(q * q);
  };
  const double log_num2 = std::log(num2);
  const double log_2kC = std::log(2.0 * k * std::abs(C));
  return TraceProfile(
      Domain::ball, map.R(), map.transplant_dim(),
      [=](double s, double gap, double t) {
        const double r = map_inverse(m, s, gap);
        if (std::isinf(r)) return 0.0;
        return C * std::exp(k * (log_num2 - log_D(r, t)));
      },
      [=](double s, double gap, double t) {
        const double r = map_inverse(m, s, gap);
        if (std::isinf(r)) return 0.0;
        // d/dr = -2k phi r / D, then divided by ds/dr.
        const double lD = log_D(r, t);
        const double mag = std::exp(log_2kC + k * (log_num2 - lD) + std::log(r) - lD -
                                    map_log_jacobian(m, r));
        return -std::copysign(mag, C);
      },
      [=](double s, double gap, double t) {
        const double r = map_inverse(m, s, gap);
        if (std::isinf(r)) return 0.0;
        const double lD = log_D(r, t);
        const double mag = std::exp(log_2kC + k * (log_num2 - lD) + std::log(eps + t) - lD);
        return -std::copysign(mag, C);
      },
      "trace extremal(eps=" + num(eps) + ", C=" + num(C) + ")");
}

RadialProfile moser_profile(int N, double k) {
  require(N >= 3, ErrorKind::domain, "moser_profile: requires N >= 3");
  require(k > 0.0, ErrorKind::domain, "moser_profile: requires k > 0");
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * k);
  const double rk = std::pow(k, -1.0 / (N - 2.0));
  RadialProfile U(
      Domain::halfline, kInf, N,
      [=](double r, double) { return norm * std::min(std::pow(r, 2.0 - N), k); },
      [=](double r, double) {
        return r <= rk ? 0.0 : norm * (2.0 - N) * std::pow(r, 1.0 - N);
      },
      "moser truncated log(k=" + num(k) + ")");
  return U.with_breakpoints({rk});
}

}  // namespace finsler
