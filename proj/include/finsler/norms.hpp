#pragma once

// Finsler norms H, their duals H0, Wulff balls and the polar formula.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "finsler/quadrature.hpp"

namespace finsler {

/// An even, convex, 1-homogeneous gauge on R^N. Cheap to copy; all copies
/// share one immutable description plus a lazily filled measure cache.
class NormSpec {
 public:
  enum class Kind { euclidean, weighted_lq, generic };
  using Gauge = std::function<double(std::span<const double>)>;

  static NormSpec euclidean(int dim);
  /// H(xi) = (sum |w_i xi_i|^q)^(1/q), q in [1, inf]; q = inf gives the
  /// weighted max norm.
  static NormSpec weighted_lq(double q, std::vector<double> weights);
  /// Gauge supplied as an evaluation callable. It must be safe to call
  /// concurrently.
  static NormSpec generic(int dim, Gauge gauge, std::string label);

  Kind kind() const;
  int dim() const;
  double q() const;  // 2 for euclidean, NaN for generic
  const std::vector<double>& weights() const;
  const Gauge& gauge() const;
  const std::string& label() const;
  bool closed_form() const { return kind() != Kind::generic; }

  struct State;
  const std::shared_ptr<State>& state() const { return state_; }

 private:
  explicit NormSpec(std::shared_ptr<State> s) : state_(std::move(s)) {}
  std::shared_ptr<State> state_;
};

/// H(xi). Exactly 0 at the origin.
double norm_eval(const NormSpec& spec, std::span<const double> xi);

/// grad H(xi), xi != 0. Closed form for built-ins, central differences with
/// step eps^(1/3) max(1, |xi|) for generic gauges.
std::vector<double> norm_grad(const NormSpec& spec, std::span<const double> xi);

struct GradDiagnostic {
  std::vector<double> grad;
  double euler_residual = 0.0;  // |grad . xi - H(xi)| / H(xi)
  bool ok = false;              // residual within 1e-6
};

/// norm_grad plus the Euler identity residual; never throws for kinks.
GradDiagnostic norm_grad_checked(const NormSpec& spec,
                                 std::span<const double> xi);

/// H0(x) = sup (xi . x) / H(xi). Closed form for built-ins. Generic gauges
/// use 32 deterministic restarts of projected ascent on the unit sphere
/// followed by compass polishing; the answer is certified when at least two
/// restarts agree with the best to 1e-8 relative, otherwise a convergence
/// error carries the best lower bound.
double dual_eval(const NormSpec& spec, std::span<const double> x);

/// Single-start ascent from x/|x|. Every local maximiser of a linear
/// functional over a convex body is global, so this is exact up to the
/// optimiser tolerance for convex gauges; used for Monte Carlo membership.
double dual_eval_fast(const NormSpec& spec, std::span<const double> x);

/// grad H0(x), x != 0. Closed form for built-ins, central differences of
/// dual_eval for generic gauges.
std::vector<double> dual_grad(const NormSpec& spec, std::span<const double> x);

/// The dual norm as a NormSpec: closed form for built-ins (exponent q',
/// reciprocal weights), otherwise a generic gauge evaluating dual_eval.
NormSpec dual_spec(const NormSpec& spec);

struct KappaSource {
  bool monte_carlo = false;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double standard_error = 0.0;
  bool precision_warning = false;  // relative standard error above 1e-3
};

struct WulffMeasure {
  double kappa = 0.0;
  KappaSource source;
};

/// Monte Carlo settings for gauges without a closed-form measure.
struct MeasureOptions {
  std::size_t samples = std::size_t{1} << 20;
  std::uint64_t seed = 0x5eed;
  unsigned workers = 0;
};

/// kappa_N = |{H0 < 1}|. Closed form for built-ins; hit-or-miss Monte Carlo
/// otherwise, computed once per NormSpec and cached.
WulffMeasure wulff_measure(const NormSpec& spec,
                           const MeasureOptions& options = {});

struct WulffBall {
  NormSpec norm;
  double radius = 1.0;
  double measure = 0.0;  // kappa_N R^N
  KappaSource kappa_source;
};

WulffBall wulff_ball(const NormSpec& spec, double radius);

struct AmbientConstants {
  int dim = 0;
  double sphere_area = 0.0;  // omega_{N-1}
  double kappa = 0.0;
  double ratio = 0.0;  // omega_{N-1} / (N kappa_N)
};

AmbientConstants ambient_constants(const NormSpec& spec);

/// N kappa_N r^(N-1).
double wulff_perimeter(const NormSpec& spec, double r);

/// N kappa_N int_0^t h(s) s^(N-1) ds, t may be +inf. Throws a precision
/// error (value = achieved estimate) when the quadrature does not converge.
double polar_integral(const NormSpec& spec, const std::function<double(double)>& h,
                      double t, double tol = quad::Tolerances{}.singular);

std::string describe(const NormSpec& spec);

}  // namespace finsler
