#include "finsler/profile.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/error.hpp"

namespace finsler {

RadialProfile::RadialProfile(Domain domain, double radius, int dim, Fn value,
                             Fn derivative, std::string description)
    : domain_(domain),
      radius_(domain == Domain::ball ? radius
                                     : std::numeric_limits<double>::infinity()),
      dim_(dim),
      value_(std::move(value)),
      derivative_(std::move(derivative)),
      description_(std::move(description)) {
  require(static_cast<bool>(value_), ErrorKind::input,
          "RadialProfile: value callable is empty");
  require(domain == Domain::halfline || radius > 0.0, ErrorKind::domain,
          "RadialProfile: ball radius must be positive");
  require(dim >= 1, ErrorKind::input, "RadialProfile: dimension must be >= 1");
}

double RadialProfile::derivative(double x, double gap) const {
  if (derivative_) return derivative_(x, gap);
  double h = std::cbrt(std::numeric_limits<double>::epsilon()) *
             std::max(1.0, std::abs(x));
  h = std::min(h, 0.5 * x);
  if (domain_ == Domain::ball) h = std::min(h, 0.5 * gap);
  return (value_(x + h, gap - h) - value_(x - h, gap + h)) / (2.0 * h);
}

RadialProfile RadialProfile::with_breakpoints(std::vector<double> points) const {
  RadialProfile copy = *this;
  std::sort(points.begin(), points.end());
  copy.breakpoints_ = std::move(points);
  return copy;
}

RadialProfile RadialProfile::scaled(double c) const {
  auto v = value_;
  Fn d;
  if (derivative_) {
    auto dd = derivative_;
    d = [dd, c](double x, double g) { return c * dd(x, g); };
  }
  RadialProfile out(domain_, radius_, dim_,
                    [v, c](double x, double g) { return c * v(x, g); }, d,
                    std::to_string(c) + " * " + description_);
  out.breakpoints_ = breakpoints_;
  return out;
}

RadialProfile RadialProfile::perturbed(double delta,
                                       const RadialProfile& eta) const {
  require(eta.domain() == domain_ && eta.dim() == dim_ &&
              (domain_ == Domain::halfline || eta.radius() == radius_),
          ErrorKind::input, "perturbed: perturbation lives on another domain");
  const RadialProfile base = *this;
  const RadialProfile bump = eta;
  Fn d;
  if (base.analytic_derivative() && bump.analytic_derivative()) {
    d = [base, bump, delta](double x, double g) {
      return base.derivative(x, g) + delta * bump.derivative(x, g);
    };
  }
  RadialProfile out(
      domain_, radius_, dim_,
      [base, bump, delta](double x, double g) {
        return base.value(x, g) + delta * bump.value(x, g);
      },
      d, description_ + " + " + std::to_string(delta) + " * " + eta.description());
  auto points = breakpoints_;
  points.insert(points.end(), eta.breakpoints().begin(), eta.breakpoints().end());
  return out.with_breakpoints(points);
}

RadialProfile::BoundaryCheck RadialProfile::boundary_check() const {
  BoundaryCheck c;
  if (domain_ != Domain::ball) return c;
  const int grid = 200;
  for (int i = 1; i < grid; ++i) {
    const double x = radius_ * i / grid;
    c.sup = std::max(c.sup, std::abs(value_(x, radius_ - x)));
  }
  const double gap = 1e-6 * radius_;
  c.at = radius_ - gap;
  c.value = value_(c.at, gap);
  c.vanishes = std::abs(c.value) <= 1e-4 * c.sup;
  return c;
}

TraceProfile::TraceProfile(Domain domain, double radius, int dim, Fn value,
                           Fn d_ds, Fn d_dt, std::string description)
    : domain_(domain),
      radius_(domain == Domain::ball ? radius
                                     : std::numeric_limits<double>::infinity()),
      dim_(dim),
      value_(std::move(value)),
      d_ds_(std::move(d_ds)),
      d_dt_(std::move(d_dt)),
      description_(std::move(description)) {
  require(value_ && d_ds_ && d_dt_, ErrorKind::input,
          "TraceProfile: value and both partial derivatives are required");
}

TraceProfile TraceProfile::scaled(double c) const {
  auto v = value_;
  auto ds = d_ds_;
  auto dt = d_dt_;
  return TraceProfile(
      domain_, radius_, dim_,
      [v, c](double s, double g, double t) { return c * v(s, g, t); },
      [ds, c](double s, double g, double t) { return c * ds(s, g, t); },
      [dt, c](double s, double g, double t) { return c * dt(s, g, t); },
      std::to_string(c) + " * " + description_);
}

}  // namespace finsler
