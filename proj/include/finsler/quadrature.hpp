#pragma once

// One- and two-dimensional integration: adaptive Gauss-Kronrod for regular
// integrands, double-exponential rules for endpoint singularities and the
// half-line, and Monte Carlo over Wulff balls.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace finsler {

class NormSpec;

namespace quad {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Default relative tolerances.
struct Tolerances {
  double smooth = 1e-10;
  double singular = 1e-8;
  double two_d = 1e-6;
};

using Integrand = std::function<double(double)>;

/// Integrand that also receives the exact distances to both endpoints,
/// `left_gap = x - a` and `right_gap = b - x`. The gap next to the nearer
/// endpoint is carried without cancellation, so weights like (1 - s/R)^-k
/// can be evaluated accurately right up to the boundary.
using GapIntegrand =
    std::function<double(double x, double left_gap, double right_gap)>;

/// Two-variable integrand; `gap` is s_upper - s carried exactly (+inf when
/// the s-range is the half-line).
using Integrand2 = std::function<double(double s, double gap, double t)>;

/// One-variable integrand on (0, R) receiving gap = R - x exactly.
using BoundaryIntegrand = std::function<double(double x, double gap)>;

/// Globally adaptive 15-point Kronrod rule, at most 10^4 subdivisions.
/// Never throws on non-convergence; inspect `converged`.
QuadResult integrate_finite(const Integrand& f, double a, double b,
                            double tol = Tolerances{}.smooth);

/// Tanh-sinh rule on (a, b); endpoints are never sampled. Throws a
/// divergence error when the levels do not settle (non-integrable blow-up).
QuadResult integrate_singular(const Integrand& f, double a, double b,
                              double tol = Tolerances{}.singular);
QuadResult integrate_singular(const GapIntegrand& f, double a, double b,
                              double tol = Tolerances{}.singular);

/// Integral over (0, inf). Optional interior breakpoints split the domain;
/// finite pieces use tanh-sinh, the tail uses exp-sinh.
QuadResult integrate_halfline(const Integrand& f,
                              double tol = Tolerances{}.singular,
                              std::span<const double> breakpoints = {});

/// Integral over (a, b) split at breakpoints, tanh-sinh on every piece.
QuadResult integrate_pieces(const Integrand& f, double a, double b,
                            double tol, std::span<const double> breakpoints);

/// Integral over (0, R) split at breakpoints, tanh-sinh on every piece; the
/// integrand sees the exact distance to R on the last piece.
QuadResult integrate_ball(const BoundaryIntegrand& f, double R, double tol,
                          std::span<const double> breakpoints = {});

/// Iterated integral over (0, s_upper) x (0, inf): inner tanh-sinh in s for
/// every t (tolerance tol/10), outer exp-sinh in t. `s_upper` may be
/// infinite, in which case the inner integral is over the half-line too.
QuadResult integrate_2d(const Integrand2& f, double s_upper,
                        double tol = Tolerances{}.two_d,
                        std::span<const double> s_breakpoints = {});

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
  std::size_t accepted = 0;
};

using PointFunction = std::function<double(std::span<const double>)>;

/// Uniform rejection sampling of g over the Wulff ball {H0(x) < R} inside
/// its bounding box |x_i| <= R H(e_i). Samples are drawn in fixed chunks,
/// each chunk with its own engine keyed by (seed, chunk index), and chunk
/// statistics are merged in chunk order, so the result is bit-identical for
/// any worker count. `workers == 0` uses the hardware concurrency.
McEstimate mc_wulff_integral(const NormSpec& spec, double R,
                             const PointFunction& g, std::size_t n,
                             std::uint64_t seed, unsigned workers = 0);

}  // namespace quad
}  // namespace finsler
