#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>

#include "finsler/error.hpp"
#include "finsler/norms.hpp"
#include "finsler/quadrature.hpp"

using namespace finsler;

TEST_CASE("adaptive Kronrod on smooth integrands") {
  const auto r = quad::integrate_finite([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("tanh-sinh handles endpoint singularities") {
  const auto r = quad::integrate_singular([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
  const auto l = quad::integrate_singular([](double x) { return std::log(x); }, 0.0, 1.0);
  CHECK(l.value == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("tanh-sinh error estimate is in the units of the interval") {
  // Narrow and wide intervals must both report a relative error consistent
  // with the achieved accuracy.
  for (double w : {1e-6, 1e-2, 1.0, 1e3}) {
    const auto r = quad::integrate_singular([](double x) { return std::exp(-x); }, 0.0, w);
    const double exact = -std::expm1(-w);
    CHECK(r.converged);
    CHECK(std::abs(r.value - exact) <= 1e-9 * exact);
    CHECK(r.error_estimate <= 1e-8 * exact);
  }
}

TEST_CASE("gap integrand sees the exact distance to the endpoint") {
  const double b = 1.0;
  const auto r = quad::integrate_singular(
      [](double, double, double right) { return std::pow(right, -0.5); }, 0.0, b);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("non-integrable blow-up is reported") {
  try {
    quad::integrate_singular([](double x) { return 1.0 / x; }, 0.0, 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::divergence || e.kind() == ErrorKind::precision));
  }
}

TEST_CASE("half-line with breakpoints") {
  const auto r = quad::integrate_halfline([](double x) { return std::exp(-x); });
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
  const double bp[] = {1.0};
  const auto k = quad::integrate_halfline(
      [](double x) { return x < 1.0 ? 1.0 : std::exp(1.0 - x); }, 1e-10, bp);
  CHECK(k.value == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("ball integral and pieces") {
  const auto r = quad::integrate_ball([](double, double gap) { return gap * gap; }, 2.0, 1e-10);
  CHECK(r.value == doctest::Approx(8.0 / 3.0).epsilon(1e-10));
  const double bp[] = {0.5};
  const auto p = quad::integrate_pieces([](double x) { return std::abs(x - 0.5); }, 0.0, 1.0,
                                        1e-10, bp);
  CHECK(p.value == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("iterated 2-D integral") {
  const auto r = quad::integrate_2d(
      [](double s, double, double t) { return std::exp(-s - t); }, 1.0, 1e-8);
  CHECK(r.value == doctest::Approx(-std::expm1(-1.0)).epsilon(1e-7));
  const auto h = quad::integrate_2d(
      [](double s, double, double t) { return std::exp(-s * s - t * t); },
      std::numeric_limits<double>::infinity(), 1e-8);
  CHECK(h.value == doctest::Approx(std::numbers::pi / 4).epsilon(1e-7));
}

TEST_CASE("Monte Carlo over a Wulff ball") {
  const auto spec = NormSpec::euclidean(3);
  const auto one = [](std::span<const double>) { return 1.0; };
  const auto a = quad::mc_wulff_integral(spec, 1.0, one, 200000, 7, 1);
  CHECK(std::abs(a.estimate - 4.0 * std::numbers::pi / 3.0) < 4.0 * a.standard_error);
  SUBCASE("bit-identical for any worker count") {
    const auto b = quad::mc_wulff_integral(spec, 1.0, one, 200000, 7, 3);
    CHECK(a.estimate == b.estimate);
    CHECK(a.standard_error == b.standard_error);
    CHECK(a.accepted == b.accepted);
  }
  SUBCASE("seed changes the sample") {
    const auto c = quad::mc_wulff_integral(spec, 1.0, one, 200000, 8, 1);
    CHECK(a.estimate != c.estimate);
  }
}
