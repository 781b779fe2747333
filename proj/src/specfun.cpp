#include "finsler/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "finsler/error.hpp"

namespace finsler::specfun {
namespace {

constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,
    .15808870322491248884e-3,   -.21026444172410488319e-3,
    .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,
    .36899182659531622704e-5};

// (-1)^k zeta(k) / k for k = 2..41: Taylor coefficients of ln Gamma(1+e).
constexpr std::array<double, 40> kLogGammaTaylor = {
    0.8224670334241132182362,   -0.4006856343865314284666,
    0.270580808427784547879,    -0.2073855510286739852663,
    0.1695571769974081899524,   -0.14404989676884611812,
    0.1255096695247430424223,   -0.1113342658695646904909,
    0.1000994575127818085337,   -0.09095401714582904223261,
    0.08335384054610900402489,  -0.07693251641135219147283,
    0.07143294629536133605923,  -0.0666687058824204680329,
    0.06250095514121304074198,  -0.05882397865868458233896,
    0.05555576762740361110221,  -0.05263167937961666073363,
    0.05000004769810169363981,  -0.04761907033014222799078,
    0.04545455629320466944241,  -0.04347826605304025936135,
    0.04166666915034121046914,  -0.04000000119214014058609,
    0.03846153903467518570635,  -0.03703703731298932554946,
    0.03571428584733335802816,  -0.03448275868491930081079,
    0.03333333336437758108066,  -0.03225806453115041633882,
    0.03125000000727597448024,  -0.03030303030655804550688,
    0.02941176470759434473174,  -0.02857142857226011001271,
    0.02777777777818199783031,  -0.02702702702722367459014,
    0.02631578947377994683019,  -0.02564102564107228178591,
    0.0250000000000227373696,   -0.02439024390245011578971};

constexpr double kEulerGamma = 0.5772156649015328606065121;
constexpr double kNearZeroBand = 0.35;

// ln Gamma(1 + e) for |e| <= kNearZeroBand, full relative accuracy near e=0.
double log_gamma_1p(double e) {
  double sum = 0.0;
  for (std::size_t k = kLogGammaTaylor.size(); k-- > 0;) {
    sum = sum * e + kLogGammaTaylor[k];
  }
  return e * (-kEulerGamma + e * sum);
}

double lanczos_log_gamma(double x) {
  const double z = x - 1.0;
  double a = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) a += kLanczos[k] / (z + k);
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(a);
}

void check_bessel_box(double nu, double x) {
  if (!(nu >= 0.0 && nu <= 30.0) || !(x >= 0.0 && x <= 100.0)) {
    fail(ErrorKind::domain, "bessel_j: (nu, x) = (" + std::to_string(nu) +
                                ", " + std::to_string(x) +
                                ") outside [0,30] x [0,100]");
  }
}

double bessel_series(double nu, double x) {
  const double half = 0.5 * x;
  double term = std::exp(nu * std::log(half) - log_gamma(nu + 1.0));
  double sum = term;
  const double q = -half * half;
  for (int k = 1; k < 500; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && k > half) break;
  }
  return sum;
}

// Miller backward recurrence normalised with
//   (x/2)^a = sum_j (a + 2j) Gamma(a + j) / j! * J_{a+2j}(x),  0 <= a < 1.
double bessel_miller(double nu, double x) {
  const int n0 = static_cast<int>(std::floor(nu));
  const double alpha = nu - n0;
  const double big = std::max({x, nu, 1.0});
  int m = static_cast<int>(big + std::sqrt(60.0 * big) + 20.0);
  m += m % 2;

  std::vector<double> coef(m / 2 + 1);
  const double g1 = std::exp(log_gamma(alpha + 1.0));
  coef[0] = g1;
  double g = g1;
  for (int j = 1; j <= m / 2; ++j) {
    coef[j] = (alpha + 2.0 * j) * g;
    g *= (alpha + j) / (j + 1.0);
  }

  double above = 0.0;
  double current = 1e-30;
  double norm = 0.0;
  double target = 0.0;
  for (int k = m; k >= 0; --k) {
    if (k % 2 == 0) norm += coef[k / 2] * current;
    if (k == n0) target = current;
    if (k == 0) break;
    const double below = 2.0 * (alpha + k) / x * current - above;
    above = current;
    current = below;
    if (std::abs(current) > 1e250) {
      current *= 1e-250;
      above *= 1e-250;
      norm *= 1e-250;
      target *= 1e-250;
    }
  }
  return target * std::pow(0.5 * x, alpha) / norm;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    fail(ErrorKind::domain,
         "log_gamma: argument must be positive, got " + std::to_string(x));
  }
  if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
  if (std::abs(x - 1.0) <= kNearZeroBand) return log_gamma_1p(x - 1.0);
  if (std::abs(x - 2.0) <= kNearZeroBand) {
    return log_gamma_1p(x - 2.0) + std::log1p(x - 2.0);
  }
  return lanczos_log_gamma(x);
}

double bessel_j(double nu, double x) {
  check_bessel_box(nu, x);
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x <= 12.0) return bessel_series(nu, x);
  return bessel_miller(nu, x);
}

double bessel_j_half_integer(double nu, double x) {
  const double twice = 2.0 * nu;
  const long n2 = std::lround(twice);
  if (std::abs(twice - n2) > 1e-12 || n2 % 2 == 0 || n2 < 1) {
    fail(ErrorKind::domain, "bessel_j_half_integer: order must be n + 1/2");
  }
  if (!(x > 0.0)) fail(ErrorKind::domain, "bessel_j_half_integer: x <= 0");
  const long n = (n2 - 1) / 2;
  // spherical Bessel j_n by upward recurrence
  double prev = std::sin(x) / x;
  if (n == 0) return std::sqrt(2.0 * x / std::numbers::pi) * prev;
  double cur = std::sin(x) / (x * x) - std::cos(x) / x;
  for (long k = 1; k < n; ++k) {
    const double next = (2.0 * k + 1.0) / x * cur - prev;
    prev = cur;
    cur = next;
  }
  return std::sqrt(2.0 * x / std::numbers::pi) * cur;
}

BesselZero bessel_first_zero(double nu) {
  if (!(nu >= 0.0 && nu <= 30.0)) {
    fail(ErrorKind::domain, "bessel_first_zero: order outside [0, 30]");
  }
  const double step = 0.1;
  double lo = nu + 1.0;
  double flo = bessel_j(nu, lo);
  double hi = lo;
  double fhi = flo;
  bool bracketed = false;
  while (hi < nu + 20.0) {
    hi = lo + step;
    fhi = bessel_j(nu, hi);
    if (std::signbit(flo) != std::signbit(fhi) || fhi == 0.0) {
      bracketed = true;
      break;
    }
    lo = hi;
    flo = fhi;
  }
  if (!bracketed) {
    fail(ErrorKind::search, "bessel_first_zero: no sign change up to nu + 20");
  }

  // Illinois regula falsi with a bisection safeguard.
  int side = 0;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    double mid = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(mid > lo && mid < hi) || it % 4 == 3) mid = 0.5 * (lo + hi);
    const double fmid = bessel_j(nu, mid);
    if (fmid == 0.0) {
      lo = hi = mid;
      break;
    }
    if (std::signbit(fmid) == std::signbit(flo)) {
      lo = mid;
      flo = fmid;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      fhi = fmid;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  BesselZero zero;
  zero.order = nu;
  zero.index = 1;
  zero.value = 0.5 * (lo + hi);
  zero.residual = std::abs(bessel_j(nu, zero.value));
  return zero;
}

double sphere_area(int N) {
  require(N >= 2, ErrorKind::domain, "sphere_area: N must be >= 2");
  return 2.0 * std::exp(0.5 * N * std::log(std::numbers::pi) -
                        log_gamma(0.5 * N));
}

double ball_volume(int N) {
  require(N >= 1, ErrorKind::domain, "ball_volume: N must be >= 1");
  return std::exp(0.5 * N * std::log(std::numbers::pi) -
                  log_gamma(0.5 * N + 1.0));
}

}  // namespace finsler::specfun
