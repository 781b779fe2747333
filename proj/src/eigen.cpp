#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "finsler/error.hpp"
#include "finsler/inequalities.hpp"
#include "finsler/specfun.hpp"

namespace finsler {
namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;  // (Phi, w = |Phi'|^(p-2) Phi')

constexpr double kStart = 1e-6;
constexpr double kOdeTol = 1e-13;

struct Radial {
  int N;
  double p;
  double lambda;
  void operator()(const State& y, State& dy, double r) const {
    const double w = y[1];
    dy[0] = std::copysign(std::pow(std::abs(w), 1.0 / (p - 1.0)), w);
    dy[1] = -(N - 1.0) * w / r - lambda * std::pow(std::abs(y[0]), p - 2.0) * y[0];
  }
};

// Two-term expansion at the centre: Phi = 1 - c r^p', w = -lambda r / N.
State series_start(int N, double p, double lambda, double r) {
  const double pp = p / (p - 1.0);
  const double c = ((p - 1.0) / p) * std::pow(lambda / N, 1.0 / (p - 1.0));
  return {1.0 - c * std::pow(r, pp), -lambda * r / N};
}

struct CrossedZero {};

auto stepper() {
  return odeint::make_controlled(kOdeTol, kOdeTol,
                                 odeint::runge_kutta_dopri5<State>());
}

// Integrates to r_end; throws CrossedZero as soon as Phi <= 0 when `stop`.
State integrate_to(int N, double p, double lambda, double r_end, bool stop) {
  State y = series_start(N, p, lambda, kStart);
  if (r_end <= kStart) return series_start(N, p, lambda, r_end);
  try {
    odeint::integrate_adaptive(
        stepper(), Radial{N, p, lambda}, y, kStart, r_end, 1e-4 * r_end,
        [stop](const State& s, double) {
          if (stop && s[0] <= 0.0) throw CrossedZero{};
        });
  } catch (const CrossedZero&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorKind::integration,
         std::string("p-Laplacian shooting: step control failed: ") + e.what());
  }
  return y;
}

bool hits_zero(int N, double p, double lambda) {
  try {
    const State y = integrate_to(N, p, lambda, 1.0, true);
    return y[0] <= 0.0;
  } catch (const CrossedZero&) {
    return true;
  }
}

}  // namespace

double plap_first_eigenvalue(int N, double p, double tol) {
  require(N >= 1, ErrorKind::domain, "plap_first_eigenvalue: requires N >= 1");
  require(p > 1.0, ErrorKind::domain, "plap_first_eigenvalue: requires p > 1");
  require(tol > 0.0, ErrorKind::domain, "plap_first_eigenvalue: requires tol > 0");
  // p = 2 anchor j_{N/2-1,1}^2.
  const double nu = std::max(0.0, 0.5 * N - 1.0);
  const double j = specfun::bessel_first_zero(nu).value;
  const double anchor = j * j;
  double lo = 0.5 * anchor;
  double hi = 2.0 * anchor;
  int widen = 0;
  while (hits_zero(N, p, lo)) {
    lo *= 0.5;
    if (++widen > 60) fail(ErrorKind::search, "plap_first_eigenvalue: no lower bracket");
  }
  widen = 0;
  while (!hits_zero(N, p, hi)) {
    hi *= 2.0;
    if (++widen > 60) fail(ErrorKind::search, "plap_first_eigenvalue: no upper bracket");
  }
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (hits_zero(N, p, mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

RadialProfile plap_eigenfunction(int N, double p, double R) {
  require(R > 0.0, ErrorKind::domain, "plap_eigenfunction: requires R > 0");
  const double lambda = plap_first_eigenvalue(N, p);
  auto value = [N, p, lambda, R](double s, double) {
    return integrate_to(N, p, lambda, s / R, false)[0];
  };
  auto derivative = [N, p, lambda, R](double s, double) {
    const double w = integrate_to(N, p, lambda, s / R, false)[1];
    return std::copysign(std::pow(std::abs(w), 1.0 / (p - 1.0)), w) / R;
  };
  return RadialProfile(Domain::ball, R, N, value, derivative,
                       "p-Laplacian eigenfunction(N=" + std::to_string(N) +
                           ", p=" + std::to_string(p) + ", R=" + std::to_string(R) +
                           ")");
}

}  // namespace finsler
