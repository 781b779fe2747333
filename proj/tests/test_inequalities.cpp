#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>

#include "finsler/config.hpp"
#include "finsler/error.hpp"
#include "finsler/inequalities.hpp"
#include "finsler/specfun.hpp"

using namespace finsler;

namespace {

constexpr double pi = std::numbers::pi;

RadialProfile linear_cutoff(int N, double R) {
  return RadialProfile(
      Domain::ball, R, N, [R](double, double gap) { return gap / R; },
      [R](double, double) { return -1.0 / R; }, "1 - s/R");
}

}  // namespace

TEST_CASE("Sobolev constant against its classical value") {
  const auto c = sharp_constants(Family::sobolev, 3, 2.0, NormSpec::euclidean(3));
  CHECK(c.value("S") == doctest::Approx(3.0 * std::pow(pi / 2.0, 4.0 / 3.0)).epsilon(1e-13));
  CHECK(c.tilde("S") == doctest::Approx(c.value("S")).epsilon(1e-14));
  CHECK(c.prefactor == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tilde constants scale with the Wulff prefactor") {
  const auto spec = NormSpec::weighted_lq(4.0, {1.0, 2.0, 0.7});
  const auto c = sharp_constants(Family::sobolev, 3, 2.0, spec);
  const double ratio = specfun::sphere_area(3) / (3.0 * wulff_measure(spec).kappa);
  CHECK(c.prefactor == doctest::Approx(ratio).epsilon(1e-13));
  CHECK(c.tilde("S") == doctest::Approx(c.value("S") * std::pow(ratio, 2.0 / 6.0 - 1.0)).epsilon(1e-13));
}

TEST_CASE("Gagliardo-Nirenberg exponent and log-Sobolev constant") {
  const auto g = sharp_constants(Family::gn, 3, 2.0, NormSpec::euclidean(3));
  CHECK(g.value("theta") == doctest::Approx(0.5));
  for (int N : {3, 4, 5}) {
    const auto l = sharp_constants(Family::logsob, N, 2.0, NormSpec::euclidean(N));
    CHECK(l.value("L") == doctest::Approx(2.0 / (N * pi * std::numbers::e)).epsilon(1e-13));
  }
}

TEST_CASE("Nash constant uses the first zero of J_{N/2}") {
  const auto c = sharp_constants(Family::nash, 3, 2.0, NormSpec::euclidean(3));
  CHECK(c.value("mu") == doctest::Approx(4.493409457909064).epsilon(1e-14));
}

TEST_CASE("parameter ranges are enforced") {
  const auto e3 = NormSpec::euclidean(3);
  CHECK_THROWS_AS(sharp_constants(Family::sobolev, 3, 3.5, e3), Error);
  CHECK_THROWS_AS(sharp_constants(Family::gn, 3, 3.5, e3), Error);
  CHECK_THROWS_AS(sharp_constants(Family::trace, 3, 2.0, NormSpec::euclidean(2)), Error);
  CHECK_THROWS_AS(sharp_constants(Family::sobolev, 4, 2.0, e3), Error);
  const auto p1 = sharp_constants(Family::sobolev, 3, 1.0, e3);
  CHECK(p1.display_only);
}

TEST_CASE("radial p-Laplacian eigenvalues") {
  CHECK(plap_first_eigenvalue(3, 2.0) == doctest::Approx(pi * pi).epsilon(1e-9));
  const double j = specfun::bessel_first_zero(0.0).value;
  CHECK(plap_first_eigenvalue(2, 2.0) == doctest::Approx(j * j).epsilon(1e-9));
  // N = 5, p = 2: first zero of J_{3/2}, radius 1.
  const double j32 = specfun::bessel_first_zero(1.5).value;
  CHECK(plap_first_eigenvalue(5, 2.0) == doctest::Approx(j32 * j32).epsilon(1e-9));
  const auto phi = plap_eigenfunction(3, 2.0, 2.0);
  CHECK(phi.value(0.5) == doctest::Approx(std::sin(pi / 4) / (pi / 4)).epsilon(1e-7));
}

TEST_CASE("Sobolev extremal spot value") {
  const auto m = TransplantMap::interior(3, 2.0, 1.0);
  ExtremalSpec e;
  const auto v = extremal_profile(Family::sobolev, e, m);
  CHECK(v.value(0.5) == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-13));
}

TEST_CASE("equality at the Sobolev extremal, strict inequality elsewhere") {
  const auto spec = NormSpec::weighted_lq(4.0, {1.0, 2.0, 0.7});
  const auto m = TransplantMap::interior(3, 2.0, 1.0);
  const auto c = sharp_constants(Family::sobolev, 3, 2.0, spec);
  const auto eq = evaluate_case(Family::sobolev, spec, m,
                                extremal_profile(Family::sobolev, ExtremalSpec{}, m), c, true);
  CHECK(eq.pass);
  CHECK(std::abs(eq.relative_deficit) < 1e-6);
  const auto lin = evaluate_case(Family::sobolev, spec, m, linear_cutoff(3, 1.0), c);
  CHECK(lin.pass);
  CHECK(lin.deficit > 10.0 * lin.error_budget);
}

TEST_CASE("the Sobolev deficit ratio is scale invariant") {
  const auto spec = NormSpec::euclidean(3);
  const auto m = TransplantMap::interior(3, 2.0, 1.0);
  const auto c = sharp_constants(Family::sobolev, 3, 2.0, spec);
  const auto u = linear_cutoff(3, 1.0);
  const auto a = evaluate_case(Family::sobolev, spec, m, u, c);
  const auto b = evaluate_case(Family::sobolev, spec, m, u.scaled(3.0), c);
  CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-9));
}

TEST_CASE("zero perturbation leaves the extremal deficit within budget") {
  const auto spec = NormSpec::euclidean(3);
  const auto m = TransplantMap::interior(3, 2.0, 1.0);
  const auto c = sharp_constants(Family::sobolev, 3, 2.0, spec);
  const auto v = extremal_profile(Family::sobolev, ExtremalSpec{}, m);
  const auto r = perturbation_check(Family::sobolev, spec, m, v, 0.0, 2, c);
  CHECK(std::abs(r.min_deficit) <= r.budget_at_min);
  const auto s = perturbation_check(Family::sobolev, spec, m, v, 0.1, 2, c);
  CHECK(s.min_deficit > 10.0 * s.budget_at_min);
}

TEST_CASE("Moser profile spends exactly the energy budget") {
  const auto spec = NormSpec::euclidean(3);
  const auto c = sharp_constants(Family::trudinger_moser, 3, 2.0, spec, 1.0);
  const auto m = TransplantMap::planar(spec, 1.0);
  const auto rep = evaluate_case(Family::trudinger_moser, spec, m, moser_profile(3, 50.0), c);
  CHECK(rep.pass);
  CHECK(std::isfinite(rep.lhs));
  CHECK(rep.lhs <= moser_functional_bound(1.0));
}
