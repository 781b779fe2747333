#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>

#include "finsler/specfun.hpp"

using namespace finsler;

TEST_CASE("log_gamma agrees with std::lgamma") {
  for (double x : {0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 42.25, 170.5}) {
    CHECK(specfun::log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  }
}

TEST_CASE("log_gamma reproduces factorials and Gamma(1/2)") {
  CHECK(std::exp(specfun::log_gamma(6.0)) == doctest::Approx(120.0).epsilon(1e-13));
  CHECK(specfun::log_gamma(0.5) ==
        doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("bessel_j agrees with std::cyl_bessel_j") {
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.5, 7.0, 20.0, 30.0}) {
    for (double x : {0.0, 0.01, 1.0, 4.5, 10.0, 37.0, 99.0}) {
      CHECK(std::abs(specfun::bessel_j(nu, x) - std::cyl_bessel_j(nu, x)) < 1e-10);
    }
  }
}

TEST_CASE("half-integer Bessel closed forms agree with the general routine") {
  for (double nu : {0.5, 1.5, 2.5, 3.5}) {
    for (double x : {4.0, 8.0, 20.0}) {
      CHECK(std::abs(specfun::bessel_j_half_integer(nu, x) - specfun::bessel_j(nu, x)) < 1e-10);
    }
  }
}

TEST_CASE("first Bessel zeros") {
  CHECK(specfun::bessel_first_zero(0.0).value == doctest::Approx(2.404825557695773).epsilon(1e-13));
  CHECK(specfun::bessel_first_zero(0.5).value == doctest::Approx(std::numbers::pi).epsilon(1e-13));
  CHECK(specfun::bessel_first_zero(1.5).value == doctest::Approx(4.493409457909064).epsilon(1e-13));
  for (double nu : {0.0, 1.0, 2.5, 10.0, 30.0}) {
    const auto z = specfun::bessel_first_zero(nu);
    CHECK(z.residual < 1e-10);
    CHECK(z.value > nu);
  }
}

TEST_CASE("sphere area and ball volume") {
  const double pi = std::numbers::pi;
  CHECK(specfun::sphere_area(2) == doctest::Approx(2 * pi).epsilon(1e-14));
  CHECK(specfun::sphere_area(3) == doctest::Approx(4 * pi).epsilon(1e-14));
  CHECK(specfun::ball_volume(3) == doctest::Approx(4 * pi / 3).epsilon(1e-14));
  for (int N = 2; N <= 12; ++N) {
    CHECK(specfun::sphere_area(N) == doctest::Approx(N * specfun::ball_volume(N)).epsilon(1e-13));
  }
}
