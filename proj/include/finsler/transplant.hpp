#pragma once

// Coordinate changes pairing a radial profile in r on (0, inf) with a
// profile in s on (0, R), their Jacobians and induced weights, and
// two-sided numerical checks of the resulting integral identities.
//
//   interior, trace:  r^a = s^a - R^a,  a = (p - n)/(p - 1)
//   exterior:         same algebra, the half-line side carries the gauge
//   planar:           r^(2-N) = log(R/s), s is the radius in a 2-disk
//
// n = N for interior / exterior and n = N - 1 for trace.

#include <functional>
#include <string>

#include "finsler/norms.hpp"
#include "finsler/profile.hpp"
#include "finsler/report.hpp"

namespace finsler {

enum class MapKind { interior, exterior, trace, planar };

std::string to_string(MapKind kind);

class TransplantMap {
 public:
  /// 1 < p < N.
  static TransplantMap interior(int N, double p, double R);
  static TransplantMap exterior(int N, double p, double R);
  /// Ambient dimension N >= 3, transplant dimension N - 1, 1 < p < N - 1.
  static TransplantMap trace(int N, double p, double R);
  /// N = spec.dim() >= 3, p = 2; stores kappa_N of the gauge for the weight.
  static TransplantMap planar(const NormSpec& spec, double R);

  MapKind kind() const { return kind_; }
  int ambient_dim() const { return N_; }
  int transplant_dim() const { return n_; }
  double p() const { return p_; }
  double R() const { return R_; }
  /// (p - n)/(p - 1); 2 - N for planar.
  double exponent() const { return a_; }
  double kappa() const { return kappa_; }  // planar only, NaN otherwise
  std::string describe() const;

 private:
  TransplantMap(MapKind kind, int N, int n, double p, double R, double kappa);
  MapKind kind_;
  int N_;
  int n_;
  double p_;
  double R_;
  double a_;
  double kappa_;
};

/// s(r) for r > 0.
double map_forward(const TransplantMap& map, double r);
/// R - s(r), accurate when s is close to R.
double map_forward_gap(const TransplantMap& map, double r);
/// r(s) for s in (0, R); the gap overload takes R - s directly.
double map_inverse(const TransplantMap& map, double s);
double map_inverse(const TransplantMap& map, double s, double gap);
/// ds/dr at r > 0.
double map_jacobian(const TransplantMap& map, double r);
/// log(ds/dr), finite even where ds/dr underflows (r -> inf).
double map_log_jacobian(const TransplantMap& map, double r);
/// dU / (ds/dr) at r, computed in log space; 0 when dU is 0.
double chain_quotient(const TransplantMap& map, double dU, double r);

enum class WeightKind { interior_weight, exterior_weight, trace_A_R, planar_W };

std::string to_string(WeightKind kind);

/// The weight natural to the map: interior -> interior_weight, exterior ->
/// exterior_weight, trace -> trace_A_R, planar -> planar_W.
WeightKind natural_weight(const TransplantMap& map);

/// interior_weight(s) = (1 - (s/R)^k)^(-p(n-1)/(n-p)),  k = (n-p)/(p-1)
/// exterior_weight(r) = (1 + (r/R)^k)^(-p(N-1)/(N-p))
/// trace_A_R(s)       = (1 - (s/R)^k)^(2(n-1)/(n-p)),   n = N - 1
/// planar_W(r)        = 2 pi (N-2)/(N kappa_N) R^2 r^(-2(N-1)) e^(-2 r^(2-N))
/// interior_weight may also be used with a trace map (dimension n).
double weight_at(const TransplantMap& map, WeightKind kind, double point);
double weight_at(const TransplantMap& map, WeightKind kind, double point,
                 double gap);
/// log of the weight; finite where the weight itself under- or overflows.
double log_weight_at(const TransplantMap& map, WeightKind kind, double point);
double log_weight_at(const TransplantMap& map, WeightKind kind, double point,
                     double gap);

/// Re-expresses a profile on the other side of the map: half-line profiles
/// become ball profiles on (0, R) and vice versa. Values by composition,
/// derivatives by the chain rule.
RadialProfile transplant_profile(const TransplantMap& map,
                                 const RadialProfile& profile);

/// U(r, t) on (0, inf)^2 -> V(s, t) on (0, R) x (0, inf) for a trace map.
TraceProfile transplant_profile(const TransplantMap& map,
                                const TraceProfile& profile);

/// Either the p-energy identity or the identity for int F(u).
struct Observable {
  enum class Kind { energy, functional };
  Kind kind = Kind::energy;
  std::function<double(double)> F;
  std::string label = "energy";

  static Observable energy() { return {}; }
  static Observable functional(std::function<double(double)> F,
                               std::string label) {
    return {Kind::functional, std::move(F), std::move(label)};
  }
};

/// Settings for equivalence_check; the acceptance threshold is on the
/// relative mismatch |lhs - rhs| / |rhs|.
struct EquivalenceOptions {
  double tol_1d = 1e-10;
  double tol_2d = 1e-8;
  double threshold = 1e-6;
};

/// Computes both sides of the identity belonging to the map, each in its own
/// coordinate: the Euclidean side from U(r) (or V on the Euclidean ball),
/// the gauge side as N kappa_N int (.) s^(N-1) ds with H(grad H0) evaluated
/// numerically at a fixed direction. `profile` is a half-line profile in r
/// for every kind.
VerificationReport equivalence_check(const TransplantMap& map,
                                     const NormSpec& spec,
                                     const RadialProfile& profile,
                                     const Observable& observable,
                                     const EquivalenceOptions& options = {});

/// Trace identity on (0, inf) x (0, inf); energy uses the two-dimensional
/// form with A_R, functional compares int F(U(r, 0)) on the boundary.
VerificationReport equivalence_check(const TransplantMap& map,
                                     const NormSpec& spec,
                                     const TraceProfile& profile,
                                     const Observable& observable,
                                     const EquivalenceOptions& options = {});

/// H(grad H0(theta)) at a fixed generic direction; 1 for any Finsler norm.
double gauge_factor(const NormSpec& spec);

}  // namespace finsler
