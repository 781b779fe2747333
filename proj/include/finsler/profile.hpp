#pragma once

// One-dimensional profiles U(r) on the half-line or V(s) on (0, R), and the
// two-variable profiles V(s, t) used by the trace inequality.
//
// Every callable receives the point together with its exact distance to the
// outer boundary (R - s on a ball, +inf on the half-line), so weights and
// maps can be evaluated without cancellation next to s = R.

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace finsler {

enum class Domain { ball, halfline };

class RadialProfile {
 public:
  using Fn = std::function<double(double x, double gap)>;

  /// `radius` is ignored for the half-line. An empty derivative selects
  /// central differences.
  RadialProfile(Domain domain, double radius, int dim, Fn value, Fn derivative,
                std::string description);

  double value(double x) const { return value(x, gap_of(x)); }
  double value(double x, double gap) const { return value_(x, gap); }
  double derivative(double x) const { return derivative(x, gap_of(x)); }
  double derivative(double x, double gap) const;
  bool analytic_derivative() const { return static_cast<bool>(derivative_); }

  Domain domain() const { return domain_; }
  double radius() const { return radius_; }
  int dim() const { return dim_; }
  const std::string& description() const { return description_; }

  /// Points where the profile or its derivative has a kink; quadrature
  /// splits there.
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  RadialProfile with_breakpoints(std::vector<double> points) const;

  /// c * profile.
  RadialProfile scaled(double c) const;
  /// profile + delta * eta on the same domain.
  RadialProfile perturbed(double delta, const RadialProfile& eta) const;

  double gap_of(double x) const {
    return domain_ == Domain::ball ? radius_ - x
                                   : std::numeric_limits<double>::infinity();
  }

  struct BoundaryCheck {
    double at = 0.0;
    double value = 0.0;
    double sup = 0.0;
    bool vanishes = true;
  };
  /// For ball profiles: |V(R(1 - 1e-6))| <= 1e-4 sup|V| over a probe grid.
  BoundaryCheck boundary_check() const;

 private:
  Domain domain_;
  double radius_;
  int dim_;
  Fn value_;
  Fn derivative_;
  std::string description_;
  std::vector<double> breakpoints_;
};

/// V(s, t) with s in (0, R) (or the half-line) and t > 0.
class TraceProfile {
 public:
  using Fn = std::function<double(double s, double gap, double t)>;

  TraceProfile(Domain domain, double radius, int dim, Fn value, Fn d_ds,
               Fn d_dt, std::string description);

  double value(double s, double gap, double t) const { return value_(s, gap, t); }
  double d_ds(double s, double gap, double t) const { return d_ds_(s, gap, t); }
  double d_dt(double s, double gap, double t) const { return d_dt_(s, gap, t); }
  double value(double s, double t) const { return value(s, gap_of(s), t); }

  Domain domain() const { return domain_; }
  double radius() const { return radius_; }
  int dim() const { return dim_; }  // dimension of the y-variable (N - 1)
  const std::string& description() const { return description_; }

  double gap_of(double s) const {
    return domain_ == Domain::ball ? radius_ - s
                                   : std::numeric_limits<double>::infinity();
  }

  TraceProfile scaled(double c) const;

 private:
  Domain domain_;
  double radius_;
  int dim_;
  Fn value_;
  Fn d_ds_;
  Fn d_dt_;
  std::string description_;
};

}  // namespace finsler
