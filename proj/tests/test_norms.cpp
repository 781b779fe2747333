#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <random>
#include <vector>

#include "finsler/config.hpp"
#include "finsler/error.hpp"
#include "finsler/norms.hpp"
#include "finsler/transplant.hpp"

using namespace finsler;

namespace {

std::vector<double> random_point(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

const std::vector<std::vector<double>> kM = {{2, .5, 0}, {.5, 1, .3}, {0, .3, 1.5}};

// Inverse of kM by cofactors, for the closed-form dual sqrt(x^T M^-1 x).
std::vector<std::vector<double>> inverse3(const std::vector<std::vector<double>>& m) {
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  std::vector<std::vector<double>> r(3, std::vector<double>(3));
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      const int a = (k + 1) % 3, b = (k + 2) % 3, c = (i + 1) % 3, d = (i + 2) % 3;
      r[i][k] = (m[a][c] * m[b][d] - m[a][d] * m[b][c]) / det;
    }
  }
  return r;
}

}  // namespace

TEST_CASE("euclidean and weighted norms in closed form") {
  const auto e = NormSpec::euclidean(3);
  const std::vector<double> x = {3, 4, 12};
  CHECK(norm_eval(e, x) == doctest::Approx(13.0));
  CHECK(dual_eval(e, x) == doctest::Approx(13.0));
  const auto w = NormSpec::weighted_lq(4.0, {1.0, 2.0, 0.5});
  const double h = std::pow(std::pow(3.0, 4) + std::pow(8.0, 4) + std::pow(6.0, 4), 0.25);
  CHECK(norm_eval(w, x) == doctest::Approx(h).epsilon(1e-14));
  const double qp = 4.0 / 3.0;
  const double h0 = std::pow(std::pow(3.0, qp) + std::pow(2.0, qp) + std::pow(24.0, qp), 1.0 / qp);
  CHECK(dual_eval(w, x) == doctest::Approx(h0).epsilon(1e-14));
  const std::vector<double> zero = {0, 0, 0};
  CHECK(norm_eval(w, zero) == 0.0);
}

TEST_CASE("l1 and max norms are dual to each other") {
  const auto l1 = NormSpec::weighted_lq(1.0, {1.0, 2.0});
  const auto linf = NormSpec::weighted_lq(std::numeric_limits<double>::infinity(), {1.0, 0.5});
  const std::vector<double> x = {1.5, -2.0};
  CHECK(dual_eval(l1, x) == doctest::Approx(norm_eval(linf, x)));
}

TEST_CASE("norm identities at random points") {
  std::mt19937_64 rng(12345);
  const std::vector<NormSpec> specs = {NormSpec::euclidean(3),
                                       NormSpec::weighted_lq(4.0, {1.0, 2.0, 0.7}),
                                       quadratic_norm(kM)};
  for (const auto& spec : specs) {
    for (int i = 0; i < 40; ++i) {
      const auto x = random_point(rng, 3);
      const double h0 = dual_eval(spec, x);
      const auto g0 = dual_grad(spec, x);
      const auto g = norm_grad(spec, x);
      // H(grad H0) = 1, H0(grad H) = 1, grad H0 . x = H0.
      CHECK(norm_eval(spec, g0) == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(dual_eval(spec, g) == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(dot(g0, x) == doctest::Approx(h0).epsilon(1e-6));
      // Cauchy-Schwarz for the pair (H, H0).
      const auto y = random_point(rng, 3);
      CHECK(dot(x, y) <= norm_eval(spec, y) * h0 * (1 + 1e-9));
    }
  }
}

TEST_CASE("generic dual agrees with the closed form of a quadratic gauge") {
  const auto spec = quadratic_norm(kM);
  const auto inv = inverse3(kM);
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_point(rng, 3);
    double q = 0.0;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) q += x[a] * inv[a][b] * x[b];
    }
    CHECK(dual_eval(spec, x) == doctest::Approx(std::sqrt(q)).epsilon(1e-8));
    CHECK(dual_eval_fast(spec, x) == doctest::Approx(std::sqrt(q)).epsilon(1e-8));
  }
}

TEST_CASE("homogeneity and symmetry") {
  std::mt19937_64 rng(5);
  const auto spec = NormSpec::weighted_lq(3.0, {1.0, 1.5, 2.0, 0.5});
  for (int i = 0; i < 20; ++i) {
    auto x = random_point(rng, 4);
    const double h = norm_eval(spec, x);
    for (double& v : x) v *= -2.5;
    CHECK(norm_eval(spec, x) == doctest::Approx(2.5 * h).epsilon(1e-13));
  }
}

TEST_CASE("Wulff measures in closed form") {
  const double pi = std::numbers::pi;
  CHECK(wulff_measure(NormSpec::euclidean(3)).kappa == doctest::Approx(4 * pi / 3).epsilon(1e-14));
  // H = l1 with weights: the Wulff ball is the box |x_i| < w_i.
  CHECK(wulff_measure(NormSpec::weighted_lq(1.0, {1.0, 2.0, 3.0})).kappa ==
        doctest::Approx(8.0 * 6.0).epsilon(1e-13));
  // H = weighted max: the Wulff ball is a cross-polytope.
  CHECK(wulff_measure(NormSpec::weighted_lq(std::numeric_limits<double>::infinity(),
                                            {1.0, 2.0, 3.0}))
            .kappa == doctest::Approx(8.0 * 6.0 / 6.0).epsilon(1e-13));
  // Euclidean with weights w: ellipsoid with semi-axes w_i.
  CHECK(wulff_measure(NormSpec::weighted_lq(2.0, {1.0, 2.0, 3.0})).kappa ==
        doctest::Approx(4 * pi / 3 * 6.0).epsilon(1e-13));
}

TEST_CASE("Wulff measure of a generic gauge by Monte Carlo") {
  const auto spec = quadratic_norm({{2.0, 0.3}, {0.3, 1.0}});
  MeasureOptions o;
  o.samples = 1 << 16;
  const auto m = wulff_measure(spec, o);
  const double exact = std::numbers::pi * std::sqrt(2.0 - 0.09);
  CHECK(m.source.monte_carlo);
  CHECK(std::abs(m.kappa - exact) < 4.0 * m.source.standard_error);
}

TEST_CASE("polar formula in closed form") {
  const auto spec = NormSpec::weighted_lq(4.0, {1.0, 2.0, 0.7});
  const double kappa = wulff_measure(spec).kappa;
  CHECK(polar_integral(spec, [](double) { return 1.0; }, 1.0) ==
        doctest::Approx(kappa).epsilon(1e-10));
  // int e^{-H0^2} = kappa Gamma(N/2 + 1).
  CHECK(polar_integral(spec, [](double s) { return std::exp(-s * s); },
                       std::numeric_limits<double>::infinity()) ==
        doctest::Approx(kappa * std::tgamma(2.5)).epsilon(1e-8));
  CHECK(wulff_perimeter(spec, 2.0) == doctest::Approx(3 * kappa * 4.0).epsilon(1e-14));
}

TEST_CASE("gauge factor is one") {
  CHECK(gauge_factor(NormSpec::weighted_lq(4.0, {1.0, 2.0, 0.7})) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("dimension mismatch is an input error") {
  const auto spec = NormSpec::euclidean(3);
  const std::vector<double> x = {1.0, 2.0};
  CHECK_THROWS_AS(norm_eval(spec, x), Error);
}
