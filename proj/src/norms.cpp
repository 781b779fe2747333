#include "finsler/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>

#include "finsler/error.hpp"
#include "finsler/specfun.hpp"

namespace finsler {

struct NormSpec::State {
  Kind kind = Kind::euclidean;
  int dim = 0;
  double q = 2.0;
  std::vector<double> weights;
  Gauge gauge;
  std::string label;

  std::once_flag measure_once;
  WulffMeasure measure;
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRestarts = 32;
constexpr double kAgreement = 1e-8;
constexpr double kStepStop = 1e-10;
constexpr int kMaxAscentIterations = 2000;
constexpr std::uint64_t kRestartSeed = 0x9e3779b97f4a7c15ULL;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double euclid(std::span<const double> v) {
  double m = 0.0;
  for (double c : v) m = std::max(m, std::abs(c));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double c : v) s += (c / m) * (c / m);
  return m * std::sqrt(s);
}

bool is_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; });
}

void check_dim(const NormSpec& spec, std::span<const double> v,
               const char* where) {
  if (static_cast<int>(v.size()) != spec.dim()) {
    fail(ErrorKind::input, std::string(where) + ": vector has length " +
                               std::to_string(v.size()) + ", norm has N = " +
                               std::to_string(spec.dim()));
  }
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// (sum |w_i v_i|^q)^(1/q), q in [1, inf], scaled by the largest component.
double lq_eval(double q, std::span<const double> w, std::span<const double> v) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, std::abs(w[i] * v[i]));
  if (m == 0.0 || std::isinf(q)) return m;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double z = std::abs(w[i] * v[i]) / m;
    s += q == 1.0 ? z : (q == 2.0 ? z * z : std::pow(z, q));
  }
  return q == 1.0 ? m * s : (q == 2.0 ? m * std::sqrt(s) : m * std::pow(s, 1.0 / q));
}

std::vector<double> lq_grad(double q, std::span<const double> w,
                            std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> g(n, 0.0);
  if (q == 1.0) {
    for (std::size_t i = 0; i < n; ++i) g[i] = w[i] * sign(v[i]);
    return g;
  }
  std::size_t k = 0;
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(w[i] * v[i]);
    if (a > m) {
      m = a;
      k = i;
    }
  }
  if (std::isinf(q)) {
    g[k] = w[k] * sign(v[k]);
    return g;
  }
  double s = 0.0;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = w[i] * v[i] / m;
    s += std::pow(std::abs(z[i]), q);
  }
  const double denom = std::pow(s, (q - 1.0) / q);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = w[i] * sign(z[i]) * std::pow(std::abs(z[i]), q - 1.0) / denom;
  }
  return g;
}

double conjugate(double q) {
  if (q == 1.0) return kInf;
  if (std::isinf(q)) return 1.0;
  return q / (q - 1.0);
}

std::vector<double> reciprocal(const std::vector<double>& w) {
  std::vector<double> r(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) r[i] = 1.0 / w[i];
  return r;
}

std::vector<double> central_gradient(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> at) {
  const double h =
      std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, euclid(at));
  std::vector<double> p(at.begin(), at.end());
  std::vector<double> g(at.size());
  for (std::size_t i = 0; i < at.size(); ++i) {
    const double keep = p[i];
    p[i] = keep + h;
    const double fp = f(p);
    p[i] = keep - h;
    const double fm = f(p);
    p[i] = keep;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

void normalise(std::vector<double>& v) {
  const double n = euclid(v);
  for (double& c : v) c /= n;
}

// Maximises f(xi) = xi . x / H(xi) over the unit sphere.
class DualAscent {
 public:
  DualAscent(const NormSpec& spec, std::span<const double> x)
      : spec_(spec), x_(x) {}

  double value(std::span<const double> xi) const {
    return dot(xi, x_) / norm_eval(spec_, xi);
  }

  double run(std::vector<double> xi, bool polish) const {
    normalise(xi);
    double f = value(xi);
    const std::size_t n = xi.size();
    std::vector<double> cand(n);
    double alpha = -1.0;
    for (int it = 0; it < kMaxAscentIterations; ++it) {
      const double h = norm_eval(spec_, xi);
      const auto gh = norm_grad(spec_, xi);
      std::vector<double> g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = (x_[i] - f * gh[i]) / h;
      const double radial = dot(g, xi);
      for (std::size_t i = 0; i < n; ++i) g[i] -= radial * xi[i];
      const double gn = euclid(g);
      if (gn == 0.0) break;
      if (alpha < 0.0) alpha = 0.25 / gn;
      bool accepted = false;
      while (alpha * gn > 1e-14) {
        for (std::size_t i = 0; i < n; ++i) cand[i] = xi[i] + alpha * g[i];
        normalise(cand);
        const double fc = value(cand);
        if (fc >= f + 1e-4 * alpha * gn * gn) {
          const double step = alpha * gn;
          xi = cand;
          f = fc;
          alpha *= 2.0;
          accepted = step >= kStepStop;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
    }
    if (polish) f = compass(xi, f);
    return f;
  }

 private:
  // Coordinate pattern search on the sphere; handles kinks of the gauge.
  double compass(std::vector<double>& xi, double f) const {
    const std::size_t n = xi.size();
    std::vector<double> cand(n);
    double h = 1e-2;
    int budget = 20000;
    while (h > 1e-13 && budget > 0) {
      bool improved = false;
      for (std::size_t i = 0; i < n && budget > 0; ++i) {
        for (double dir : {1.0, -1.0}) {
          cand = xi;
          cand[i] += dir * h;
          normalise(cand);
          const double fc = value(cand);
          --budget;
          if (fc > f) {
            xi = cand;
            f = fc;
            improved = true;
          }
        }
      }
      if (!improved) h *= 0.5;
    }
    return f;
  }

  const NormSpec& spec_;
  std::span<const double> x_;
};

std::vector<std::vector<double>> restart_points(int dim) {
  std::mt19937_64 engine(kRestartSeed + static_cast<std::uint64_t>(dim));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> starts(kRestarts, std::vector<double>(dim));
  for (auto& s : starts) {
    do {
      for (double& c : s) c = gauss(engine);
    } while (euclid(s) == 0.0);
    normalise(s);
  }
  return starts;
}

}  // namespace

NormSpec NormSpec::euclidean(int dim) {
  require(dim >= 1, ErrorKind::input, "euclidean: dimension must be >= 1");
  auto s = std::make_shared<State>();
  s->kind = Kind::euclidean;
  s->dim = dim;
  s->q = 2.0;
  s->weights.assign(dim, 1.0);
  s->label = "euclidean";
  return NormSpec(std::move(s));
}

NormSpec NormSpec::weighted_lq(double q, std::vector<double> weights) {
  require(q >= 1.0, ErrorKind::domain, "weighted_lq: q must be >= 1");
  require(weights.size() >= 1, ErrorKind::input,
          "weighted_lq: need at least one weight");
  for (double w : weights) {
    require(w > 0.0 && std::isfinite(w), ErrorKind::domain,
            "weighted_lq: weights must be positive and finite");
  }
  auto s = std::make_shared<State>();
  s->kind = Kind::weighted_lq;
  s->dim = static_cast<int>(weights.size());
  s->q = q;
  s->weights = std::move(weights);
  s->label = "weighted_lq";
  return NormSpec(std::move(s));
}

NormSpec NormSpec::generic(int dim, Gauge gauge, std::string label) {
  require(dim >= 1, ErrorKind::input, "generic: dimension must be >= 1");
  require(static_cast<bool>(gauge), ErrorKind::input, "generic: empty gauge");
  auto s = std::make_shared<State>();
  s->kind = Kind::generic;
  s->dim = dim;
  s->q = std::nan("");
  s->gauge = std::move(gauge);
  s->label = std::move(label);
  return NormSpec(std::move(s));
}

NormSpec::Kind NormSpec::kind() const { return state_->kind; }
int NormSpec::dim() const { return state_->dim; }
double NormSpec::q() const { return state_->q; }
const std::vector<double>& NormSpec::weights() const { return state_->weights; }
const NormSpec::Gauge& NormSpec::gauge() const { return state_->gauge; }
const std::string& NormSpec::label() const { return state_->label; }

double norm_eval(const NormSpec& spec, std::span<const double> xi) {
  check_dim(spec, xi, "norm_eval");
  if (is_zero(xi)) return 0.0;
  switch (spec.kind()) {
    case NormSpec::Kind::euclidean:
      return euclid(xi);
    case NormSpec::Kind::weighted_lq:
      return lq_eval(spec.q(), spec.weights(), xi);
    case NormSpec::Kind::generic:
      break;
  }
  const double v = spec.gauge()(xi);
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorKind::model, "norm_eval: gauge '" + spec.label() +
                               "' returned " + std::to_string(v) +
                               " at a nonzero vector");
  }
  return v;
}

std::vector<double> norm_grad(const NormSpec& spec, std::span<const double> xi) {
  check_dim(spec, xi, "norm_grad");
  require(!is_zero(xi), ErrorKind::domain, "norm_grad: xi must be nonzero");
  switch (spec.kind()) {
    case NormSpec::Kind::euclidean: {
      const double n = euclid(xi);
      std::vector<double> g(xi.begin(), xi.end());
      for (double& c : g) c /= n;
      return g;
    }
    case NormSpec::Kind::weighted_lq:
      return lq_grad(spec.q(), spec.weights(), xi);
    case NormSpec::Kind::generic:
      break;
  }
  return central_gradient(
      [&spec](std::span<const double> v) { return norm_eval(spec, v); }, xi);
}

GradDiagnostic norm_grad_checked(const NormSpec& spec,
                                 std::span<const double> xi) {
  GradDiagnostic d;
  d.grad = norm_grad(spec, xi);
  const double h = norm_eval(spec, xi);
  d.euler_residual = std::abs(dot(d.grad, xi) - h) / h;
  d.ok = std::isfinite(d.euler_residual) && d.euler_residual <= 1e-6;
  return d;
}

double dual_eval(const NormSpec& spec, std::span<const double> x) {
  check_dim(spec, x, "dual_eval");
  if (is_zero(x)) return 0.0;
  switch (spec.kind()) {
    case NormSpec::Kind::euclidean:
      return euclid(x);
    case NormSpec::Kind::weighted_lq:
      return lq_eval(conjugate(spec.q()), reciprocal(spec.weights()), x);
    case NormSpec::Kind::generic:
      break;
  }
  DualAscent ascent(spec, x);
  std::vector<double> values;
  values.reserve(kRestarts);
  for (const auto& start : restart_points(spec.dim())) {
    values.push_back(ascent.run(start, true));
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  const double best = values.front();
  const auto agreeing = std::count_if(values.begin(), values.end(), [&](double v) {
    return best - v <= kAgreement * std::abs(best);
  });
  if (agreeing < 2 || !(best > 0.0)) {
    fail(ErrorKind::convergence,
         "dual_eval: restarts did not agree to 1e-8 (best lower bound " +
             std::to_string(best) + ")",
         best);
  }
  return best;
}

double dual_eval_fast(const NormSpec& spec, std::span<const double> x) {
  if (spec.closed_form()) return dual_eval(spec, x);
  check_dim(spec, x, "dual_eval_fast");
  if (is_zero(x)) return 0.0;
  DualAscent ascent(spec, x);
  return ascent.run(std::vector<double>(x.begin(), x.end()), true);
}

std::vector<double> dual_grad(const NormSpec& spec, std::span<const double> x) {
  check_dim(spec, x, "dual_grad");
  require(!is_zero(x), ErrorKind::domain, "dual_grad: x must be nonzero");
  switch (spec.kind()) {
    case NormSpec::Kind::euclidean:
      return norm_grad(spec, x);
    case NormSpec::Kind::weighted_lq:
      return lq_grad(conjugate(spec.q()), reciprocal(spec.weights()), x);
    case NormSpec::Kind::generic:
      break;
  }
  return central_gradient(
      [&spec](std::span<const double> v) { return dual_eval(spec, v); }, x);
}

NormSpec dual_spec(const NormSpec& spec) {
  switch (spec.kind()) {
    case NormSpec::Kind::euclidean:
      return spec;
    case NormSpec::Kind::weighted_lq:
      return NormSpec::weighted_lq(conjugate(spec.q()), reciprocal(spec.weights()));
    case NormSpec::Kind::generic:
      break;
  }
  return NormSpec::generic(
      spec.dim(),
      [spec](std::span<const double> v) { return dual_eval(spec, v); },
      "dual(" + spec.label() + ")");
}

WulffMeasure wulff_measure(const NormSpec& spec, const MeasureOptions& options) {
  auto& state = *spec.state();
  std::call_once(state.measure_once, [&] {
    const int N = spec.dim();
    WulffMeasure m;
    if (spec.kind() == NormSpec::Kind::euclidean) {
      m.kappa = specfun::ball_volume(N);
    } else if (spec.kind() == NormSpec::Kind::weighted_lq) {
      // {|x / w|_{q'} < 1} is the unit l_{q'} ball stretched by w.
      const double inv = 1.0 - 1.0 / spec.q();  // 1/q'
      double log_k = N * (std::log(2.0) + specfun::log_gamma(inv + 1.0)) -
                     specfun::log_gamma(N * inv + 1.0);
      for (double w : spec.weights()) log_k += std::log(w);
      m.kappa = std::exp(log_k);
    } else {
      const auto est = quad::mc_wulff_integral(
          spec, 1.0, [](std::span<const double>) { return 1.0; },
          options.samples, options.seed, options.workers);
      m.kappa = est.estimate;
      m.source.monte_carlo = true;
      m.source.samples = est.samples;
      m.source.seed = options.seed;
      m.source.standard_error = est.standard_error;
      m.source.precision_warning = est.standard_error > 1e-3 * est.estimate;
    }
    state.measure = m;
  });
  return state.measure;
}

WulffBall wulff_ball(const NormSpec& spec, double radius) {
  require(radius > 0.0, ErrorKind::domain, "wulff_ball: radius must be positive");
  const auto m = wulff_measure(spec);
  WulffBall b{spec, radius, m.kappa * std::pow(radius, spec.dim()), m.source};
  return b;
}

AmbientConstants ambient_constants(const NormSpec& spec) {
  AmbientConstants c;
  c.dim = spec.dim();
  c.sphere_area = specfun::sphere_area(c.dim);
  c.kappa = wulff_measure(spec).kappa;
  c.ratio = c.sphere_area / (c.dim * c.kappa);
  return c;
}

double wulff_perimeter(const NormSpec& spec, double r) {
  require(r > 0.0, ErrorKind::domain, "wulff_perimeter: r must be positive");
  const int N = spec.dim();
  return N * wulff_measure(spec).kappa * std::pow(r, N - 1);
}

double polar_integral(const NormSpec& spec, const std::function<double(double)>& h,
                      double t, double tol) {
  require(t > 0.0, ErrorKind::domain, "polar_integral: t must be positive");
  const int N = spec.dim();
  auto f = [&](double s) { return h(s) * std::pow(s, N - 1); };
  const quad::QuadResult r = std::isinf(t) ? quad::integrate_halfline(f, tol)
                                           : quad::integrate_singular(f, 0.0, t, tol);
  const double scale = N * wulff_measure(spec).kappa;
  if (!r.converged) {
    fail(ErrorKind::precision,
         "polar_integral: quadrature did not reach the requested tolerance",
         scale * r.value);
  }
  return scale * r.value;
}

std::string describe(const NormSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  switch (spec.kind()) {
    case NormSpec::Kind::euclidean:
      os << "euclidean(N=" << spec.dim() << ")";
      break;
    case NormSpec::Kind::weighted_lq: {
      os << "weighted_lq(q=" << spec.q() << ", w=[";
      for (std::size_t i = 0; i < spec.weights().size(); ++i) {
        os << (i ? "," : "") << spec.weights()[i];
      }
      os << "])";
      break;
    }
    case NormSpec::Kind::generic:
      os << "generic(" << spec.label() << ", N=" << spec.dim() << ")";
      break;
  }
  return os.str();
}

}  // namespace finsler
