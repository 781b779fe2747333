#pragma once

// Special functions behind the sharp constants: log-Gamma, Bessel J of real
// order, its first positive zero, and the unit-sphere surface measure.

namespace finsler::specfun {

/// ln Gamma(x) for x > 0 (Lanczos, g = 607/128, 15 terms).
double log_gamma(double x);

/// J_nu(x) for nu in [0, 30], x in [0, 100]. Absolute error below 1e-10.
double bessel_j(double nu, double x);

/// J_nu(x) for half-integer nu = 1/2, 3/2, ... from the trigonometric closed
/// forms and upward recurrence. Independent of bessel_j; used for
/// cross-checks. Accurate when x >= nu.
double bessel_j_half_integer(double nu, double x);

struct BesselZero {
  double order = 0.0;
  int index = 1;
  double value = 0.0;
  double residual = 0.0;  // |J_order(value)|
};

/// First positive zero of J_nu, nu in [0, 30].
BesselZero bessel_first_zero(double nu);

/// Surface measure of the unit sphere S^{N-1} in R^N: 2 pi^{N/2} / Gamma(N/2).
double sphere_area(int N);

/// Lebesgue measure of the Euclidean unit ball in R^N.
double ball_volume(int N);

}  // namespace finsler::specfun
