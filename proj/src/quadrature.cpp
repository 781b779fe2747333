#include "finsler/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <deque>
#include <map>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "finsler/error.hpp"
#include "finsler/norms.hpp"

namespace finsler::quad {
namespace {

using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;

constexpr std::size_t kMaxSubdivisions = 10000;
// A double-exponential result whose last level change still exceeds this
// fraction of the L1 norm is treated as a non-integrable integrand.
constexpr double kDivergenceRatio = 1e-3;

// Boost's double-exponential integrators extend their abscissa tables lazily
// and are not reentrant, so nested integrals get one instance per depth and
// threads never share one.
thread_local int t_depth = 0;

struct DepthGuard {
  DepthGuard() { ++t_depth; }
  ~DepthGuard() { --t_depth; }
  DepthGuard(const DepthGuard&) = delete;
  DepthGuard& operator=(const DepthGuard&) = delete;
};

template <class Q>
Q& integrator() {
  thread_local std::deque<Q> pool;
  while (pool.size() <= static_cast<std::size_t>(t_depth)) pool.emplace_back();
  return pool[t_depth];
}

void check_finite(double v, const char* where) {
  if (!std::isfinite(v)) {
    fail(ErrorKind::divergence,
         std::string(where) + ": integrand produced a non-finite value");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

QuadResult finish_double_exponential(double value, double err, double L1,
                                     std::size_t evals, double tol,
                                     const char* where) {
  QuadResult r;
  r.value = value;
  r.error_estimate = err;
  r.evaluations = evals;
  r.converged = std::isfinite(value) && err <= tol * L1;
  if (!std::isfinite(value) || (!r.converged && err > kDivergenceRatio * L1)) {
    fail(ErrorKind::divergence,
         std::string(where) + ": successive levels diverge (estimate " +
             fmt(value) + ", level change " + fmt(err) + ", L1 " + fmt(L1) + ")",
         value);
  }
  return r;
}

void accumulate(QuadResult& total, const QuadResult& piece) {
  total.value += piece.value;
  total.error_estimate += piece.error_estimate;
  total.evaluations += piece.evaluations;
  total.converged = total.converged && piece.converged;
}

std::vector<double> sorted_inside(std::span<const double> points, double a,
                                  double b) {
  std::vector<double> out;
  for (double p : points) {
    if (p > a && p < b) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Panel {
  double a, b, value, error, l1;
  bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace

QuadResult integrate_finite(const Integrand& f, double a, double b,
                            double tol) {
  require(b > a, ErrorKind::domain, "integrate_finite: requires b > a");
  std::size_t evals = 0;
  auto counted = [&](double x) {
    ++evals;
    const double v = f(x);
    check_finite(v, "integrate_finite");
    return v;
  };
  auto make_panel = [&](double lo, double hi) {
    Panel p{lo, hi, 0.0, 0.0, 0.0};
    p.value = gauss_kronrod<double, 15>::integrate(counted, lo, hi, 0, 0.0,
                                                   &p.error, &p.l1);
    return p;
  };

  std::priority_queue<Panel> queue;
  queue.push(make_panel(a, b));
  double value = queue.top().value;
  double error = queue.top().error;
  double l1 = queue.top().l1;
  std::size_t subdivisions = 0;
  const double eps = std::numeric_limits<double>::epsilon();
  while (error > tol * std::abs(value) && error > 50.0 * eps * l1 &&
         subdivisions < kMaxSubdivisions) {
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      queue.push(worst);
      break;
    }
    Panel left = make_panel(worst.a, mid);
    Panel right = make_panel(mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    queue.push(left);
    queue.push(right);
    ++subdivisions;
  }

  // Re-sum in a fixed order so the result does not depend on update history.
  std::vector<Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  QuadResult r;
  for (const Panel& p : panels) {
    r.value += p.value;
    r.error_estimate += p.error;
  }
  r.evaluations = evals;
  r.converged = r.error_estimate <= tol * std::abs(r.value) ||
                r.error_estimate <= 50.0 * eps * l1;
  return r;
}

QuadResult integrate_singular(const GapIntegrand& f, double a, double b,
                              double tol) {
  require(b > a, ErrorKind::domain, "integrate_singular: requires b > a");
  std::size_t evals = 0;
  auto wrapped = [&](double x, double xc) {
    ++evals;
    double left_gap;
    double right_gap;
    if (xc <= 0.0) {
      left_gap = -xc;
      right_gap = b - x;
    } else {
      left_gap = x - a;
      right_gap = xc;
    }
    return f(x, left_gap, right_gap);
  };
  double err = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  {
    auto& ts = integrator<tanh_sinh<double>>();
    DepthGuard guard;
    try {
      value = ts.integrate(wrapped, a, b, tol, &err, &l1);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      fail(ErrorKind::divergence,
           std::string("integrate_singular: ") + e.what());
    }
  }
  // Boost rescales the value and L1 to [a, b] but reports the level-to-level
  // difference on its reference interval [-1, 1].
  err *= 0.5 * (b - a);
  return finish_double_exponential(value, err, l1, evals, tol,
                                   "integrate_singular");
}

QuadResult integrate_singular(const Integrand& f, double a, double b,
                              double tol) {
  return integrate_singular(
      GapIntegrand([&f](double x, double, double) { return f(x); }), a, b,
      tol);
}

QuadResult integrate_pieces(const Integrand& f, double a, double b, double tol,
                            std::span<const double> breakpoints) {
  const auto cuts = sorted_inside(breakpoints, a, b);
  QuadResult total;
  total.converged = true;
  double lo = a;
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    const double hi = i < cuts.size() ? cuts[i] : b;
    accumulate(total, integrate_singular(f, lo, hi, tol));
    lo = hi;
  }
  return total;
}

QuadResult integrate_ball(const BoundaryIntegrand& f, double R, double tol,
                          std::span<const double> breakpoints) {
  require(R > 0.0, ErrorKind::domain, "integrate_ball: R must be positive");
  const auto cuts = sorted_inside(breakpoints, 0.0, R);
  QuadResult total;
  total.converged = true;
  double lo = 0.0;
  for (double hi : cuts) {
    accumulate(total, integrate_singular(
                          Integrand([&](double x) { return f(x, R - x); }),
                          lo, hi, tol));
    lo = hi;
  }
  accumulate(total,
             integrate_singular(
                 GapIntegrand([&](double x, double, double right_gap) {
                   return f(x, right_gap);
                 }),
                 lo, R, tol));
  return total;
}

QuadResult integrate_halfline(const Integrand& f, double tol,
                              std::span<const double> breakpoints) {
  const auto cuts = sorted_inside(breakpoints, 0.0,
                                  std::numeric_limits<double>::infinity());
  QuadResult total;
  total.converged = true;
  double lo = 0.0;
  for (double hi : cuts) {
    accumulate(total, integrate_singular(f, lo, hi, tol));
    lo = hi;
  }

  std::size_t evals = 0;
  auto counted = [&](double x) {
    ++evals;
    return f(x);
  };
  double err = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  {
    auto& es = integrator<exp_sinh<double>>();
    DepthGuard guard;
    try {
      value = es.integrate(counted, lo,
                           std::numeric_limits<double>::infinity(), tol, &err,
                           &l1);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      fail(ErrorKind::divergence,
           std::string("integrate_halfline: ") + e.what());
    }
  }
  accumulate(total, finish_double_exponential(value, err, l1, evals, tol,
                                              "integrate_halfline"));
  return total;
}

QuadResult integrate_2d(const Integrand2& f, double s_upper, double tol,
                        std::span<const double> s_breakpoints) {
  require(s_upper > 0.0, ErrorKind::domain,
          "integrate_2d: s domain must be (0, R) with R > 0");
  const double inner_tol = tol / 10.0;
  std::size_t inner_evals = 0;
  // Absolute error of each inner integral, keyed by (s, gap). An inner
  // integral that fails keeps its estimate with 100% uncertainty; whether
  // that matters is decided by the outer integral of these errors.
  std::map<std::pair<double, double>, double> inner_error;

  // t innermost: exp-sinh follows the t-scale max(eps, r) wherever s sits,
  // whereas an inner s-integral would have to resolve a knee at gap ~ R/t.
  auto inner = [&](double s, double gap) {
    // Rescale t by the location of the largest |f| on a coarse log grid so
    // the first exp-sinh levels already see the mass.
    double scale = 1.0;
    double peak = 0.0;
    for (int k = -20; k <= 300; k += 2) {
      const double t = std::pow(10.0, k);
      const double v = std::abs(f(s, gap, t));
      ++inner_evals;
      if (std::isfinite(v) && v * t > peak) {
        peak = v * t;
        scale = t;
      }
    }
    double value = 0.0;
    double error = 0.0;
    try {
      const QuadResult r = integrate_halfline(
          [&](double tau) {
            const double t = scale * tau;
            return std::isinf(t) ? 0.0 : scale * f(s, gap, t);
          },
          inner_tol);
      inner_evals += r.evaluations;
      value = r.value;
      error = r.converged ? std::max(r.error_estimate, inner_tol * std::abs(r.value))
                          : std::abs(r.value);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::divergence || !std::isfinite(e.value())) throw;
      value = e.value();
      error = std::abs(value);
    }
    inner_error[{s, gap}] = error;
    return value;
  };
  auto outer = [&](const auto& g, double outer_tol) {
    return std::isinf(s_upper)
               ? integrate_halfline(
                     [&](double s) {
                       return g(s, std::numeric_limits<double>::infinity());
                     },
                     outer_tol, s_breakpoints)
               : integrate_ball(g, s_upper, outer_tol, s_breakpoints);
  };
  QuadResult r = outer(inner, tol);
  // Second pass over the same abscissas: the outer integral of the inner
  // errors. Only its size matters, so a loose tolerance suffices.
  const QuadResult e = outer(
      [&](double s, double gap) {
        const auto it = inner_error.find({s, gap});
        if (it != inner_error.end()) return it->second;
        inner(s, gap);
        return inner_error.at({s, gap});
      },
      1e-2);
  r.error_estimate += std::abs(e.value) + e.error_estimate;
  r.evaluations += inner_evals;
  r.converged = r.converged && r.error_estimate <= tol * std::abs(r.value);
  return r;
}

namespace {

struct ChunkStats {
  std::size_t n = 0;
  std::size_t accepted = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

void merge(ChunkStats& into, const ChunkStats& other) {
  if (other.n == 0) return;
  if (into.n == 0) {
    into = other;
    return;
  }
  const double na = static_cast<double>(into.n);
  const double nb = static_cast<double>(other.n);
  const double delta = other.mean - into.mean;
  const double n = na + nb;
  into.mean += delta * nb / n;
  into.m2 += other.m2 + delta * delta * na * nb / n;
  into.n += other.n;
  into.accepted += other.accepted;
}

constexpr std::size_t kChunk = std::size_t{1} << 15;

}  // namespace

McEstimate mc_wulff_integral(const NormSpec& spec, double R,
                             const PointFunction& g, std::size_t n,
                             std::uint64_t seed, unsigned workers) {
  require(R > 0.0, ErrorKind::domain, "mc_wulff_integral: R must be positive");
  require(n >= 2, ErrorKind::input, "mc_wulff_integral: need at least 2 samples");
  const int dim = spec.dim();
  std::vector<double> half(dim);
  double box = 1.0;
  for (int i = 0; i < dim; ++i) {
    std::vector<double> e(dim, 0.0);
    e[i] = 1.0;
    half[i] = R * norm_eval(spec, e);
    box *= 2.0 * half[i];
  }

  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<ChunkStats> stats(chunks);
  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * kChunk;
    const std::size_t count = std::min(kChunk, n - begin);
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c),
                      static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 engine(seq);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> x(dim);
    ChunkStats s;
    for (std::size_t k = 0; k < count; ++k) {
      for (int i = 0; i < dim; ++i) x[i] = half[i] * unit(engine);
      double y = 0.0;
      if (dual_eval_fast(spec, x) < R) {
        ++s.accepted;
        y = g(x);
      }
      ++s.n;
      const double delta = y - s.mean;
      s.mean += delta / static_cast<double>(s.n);
      s.m2 += delta * (y - s.mean);
    }
    stats[c] = s;
  };

  unsigned pool = workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                               : workers;
  pool = static_cast<unsigned>(std::min<std::size_t>(pool, chunks));
  if (pool <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < pool; ++w) {
      threads.emplace_back([&] {
        try {
          for (std::size_t c = next++; c < chunks; c = next++) run_chunk(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = chunks;
        }
      });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  ChunkStats total;
  for (const auto& s : stats) merge(total, s);
  const double rate =
      static_cast<double>(total.accepted) / static_cast<double>(total.n);
  if (rate < 1e-4) {
    fail(ErrorKind::efficiency,
         "mc_wulff_integral: acceptance rate " + std::to_string(rate) +
             " below 1e-4");
  }
  McEstimate est;
  est.samples = total.n;
  est.accepted = total.accepted;
  est.estimate = box * total.mean;
  est.standard_error =
      box * std::sqrt(total.m2 / static_cast<double>(total.n - 1) /
                      static_cast<double>(total.n));
  return est;
}

}  // namespace finsler::quad
