#pragma once

// Sharp constants, extremal profiles, the radial p-Laplacian eigenvalue and
// the engine that evaluates both sides of each Finsler inequality.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "finsler/norms.hpp"
#include "finsler/profile.hpp"
#include "finsler/report.hpp"
#include "finsler/transplant.hpp"

namespace finsler {

enum class Family { sobolev, gn, nash, logsob, poincare, trace, trudinger_moser };

std::string to_string(Family family);
Family family_from_string(const std::string& name);
const std::vector<Family>& all_families();

/// Descriptive label carried by every report of the family.
std::string family_label(Family family);

struct SharpConstants {
  Family family = Family::sobolev;
  int N = 0;
  double p = 0.0;  // q for gn
  double R = 1.0;
  std::string norm;
  double prefactor = 1.0;  // omega/(n kappa_n) of the relevant dimension
  std::map<std::string, double> values;
  std::map<std::string, double> tilde_values;
  std::map<std::string, std::string> tags;  // formula description per name
  bool display_only = false;                // p = 1 branches
  std::vector<std::string> notes;

  double value(const std::string& name) const;
  double tilde(const std::string& name) const;
};

/// Parameter ranges: sobolev, logsob, poincare 1 < p < N (p = 1 is accepted
/// for sobolev and logsob as a display-only branch); gn N >= 3,
/// 1 < q <= N/(N-2); nash, trudinger_moser N >= 3; trace N >= 3,
/// 1 < p < N - 1. The norm lives on R^N, except for trace where it lives on
/// R^(N-1).
SharpConstants sharp_constants(Family family, int N, double p_or_q,
                               const NormSpec& spec, double R = 1.0);

/// C(N, p) normalising the log-Sobolev extremal to unit L^p mass.
double logsob_normaliser(int N, double p, double sigma);

/// First Dirichlet eigenvalue of the radial p-Laplacian on the unit ball,
/// by shooting from r = 1e-6 and bisection on lambda. Requires p > 1.
double plap_first_eigenvalue(int N, double p, double tol = 1e-12);

/// Phi_R(s) = Phi(s / R), Phi(0) = 1, on the ball of radius R. Each
/// evaluation integrates the ODE afresh.
RadialProfile plap_eigenfunction(int N, double p, double R);

struct ExtremalSpec {
  double a = 1.0;       // sobolev
  double b = 1.0;       // sobolev
  double sigma = 1.0;   // gn, logsob
  double C = 1.0;       // amplitude (all but logsob, whose amplitude is C(N,p))
  double lambda = 1.0;  // nash
  double eps = 1.0;     // trace
  double q = 2.0;       // gn exponent
  double mu = std::nan("");  // nash Bessel zero; NaN computes it
};

/// The equality profile of the family in its native coordinate: V(s) on the
/// Wulff ball for sobolev, gn, nash, logsob; U(r) on the half-line for
/// poincare. trace and trudinger_moser have their own entry points.
RadialProfile extremal_profile(Family family, const ExtremalSpec& spec,
                               const TransplantMap& map);

/// V(s, t) on W_R^(N-1) x (0, inf).
TraceProfile trace_extremal(const ExtremalSpec& spec, const TransplantMap& map);

/// Moser's truncated logarithm, transplanted: U_k(r) = min(r^(2-N), k) /
/// sqrt(2 pi k). Its energy equals the budget N(N-2) kappa_N/(2 pi).
RadialProfile moser_profile(int N, double k);

struct EvaluateOptions {
  double tol_1d = 1e-10;
  double tol_2d = 1e-7;
};

/// Evaluates lhs and rhs of the family's inequality for `profile` (ball
/// profile in s, or half-line profile in r for poincare and
/// trudinger_moser). Deficit = rhs - lhs. Log-Sobolev renormalises to unit
/// mass first; Trudinger-Moser requires the energy budget.
VerificationReport evaluate_case(Family family, const NormSpec& spec,
                                 const TransplantMap& map,
                                 const RadialProfile& profile,
                                 const SharpConstants& constants,
                                 bool extremal = false,
                                 const EvaluateOptions& options = {});

VerificationReport evaluate_trace(const NormSpec& spec, const TransplantMap& map,
                                  const TraceProfile& profile,
                                  const SharpConstants& constants,
                                  bool extremal = false,
                                  const EvaluateOptions& options = {});

/// Upper bound used for the Trudinger-Moser witness: 5 pi R^2.
double moser_functional_bound(double R);

struct PerturbationResult {
  double min_deficit = 0.0;
  double budget_at_min = 0.0;
  std::vector<VerificationReport> reports;
};

/// v + delta * eta_j for j = 1..n. On a ball eta_j = c_j (s/R)^j (1 - s/R),
/// on the half-line eta_j = c_j r^j e^(-r), with c_j matching sup|eta_j| to
/// sup|v|.
PerturbationResult perturbation_check(Family family, const NormSpec& spec,
                                      const TransplantMap& map,
                                      const RadialProfile& base, double delta,
                                      int directions,
                                      const SharpConstants& constants,
                                      const EvaluateOptions& options = {});

}  // namespace finsler
