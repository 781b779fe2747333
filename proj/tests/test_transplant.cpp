#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <limits>
#include <numbers>

#include "finsler/config.hpp"
#include "finsler/error.hpp"
#include "finsler/transplant.hpp"

using namespace finsler;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RadialProfile gaussian(int N) {
  return RadialProfile(
      Domain::halfline, kInf, N, [](double r, double) { return std::exp(-r * r); },
      [](double r, double) { return -2.0 * r * std::exp(-r * r); }, "exp(-r^2)");
}

}  // namespace

TEST_CASE("interior map at N = 3, p = 2 is s = rR/(R + r)") {
  const auto m = TransplantMap::interior(3, 2.0, 2.0);
  CHECK(m.exponent() == doctest::Approx(-1.0));
  for (double r : {1e-3, 0.5, 1.0, 7.0, 1e4}) {
    CHECK(map_forward(m, r) == doctest::Approx(2.0 * r / (2.0 + r)).epsilon(1e-14));
    CHECK(map_jacobian(m, r) == doctest::Approx(4.0 / ((2.0 + r) * (2.0 + r))).epsilon(1e-13));
    CHECK(map_forward_gap(m, r) == doctest::Approx(4.0 / (2.0 + r)).epsilon(1e-13));
  }
}

TEST_CASE("maps round-trip") {
  const auto spec = NormSpec::euclidean(3);
  for (const auto& m : {TransplantMap::interior(3, 2.0, 1.0), TransplantMap::interior(4, 2.5, 3.0),
                        TransplantMap::exterior(3, 1.5, 1.0), TransplantMap::trace(4, 2.0, 1.0),
                        TransplantMap::planar(spec, 1.0)}) {
    for (double r : {1e-2, 0.3, 1.0, 4.0, 50.0}) {
      const double s = map_forward(m, r);
      CHECK(map_inverse(m, s, map_forward_gap(m, r)) == doctest::Approx(r).epsilon(1e-10));
    }
  }
}

TEST_CASE("log Jacobian matches finite differences of the forward map") {
  const auto spec = NormSpec::euclidean(3);
  for (const auto& m : {TransplantMap::interior(3, 2.0, 1.0), TransplantMap::interior(5, 3.0, 2.0),
                        TransplantMap::trace(4, 2.0, 1.0), TransplantMap::planar(spec, 1.0)}) {
    for (double r : {0.2, 0.7, 1.0, 3.0}) {
      const double h = 1e-5 * r;
      const double fd = (map_forward(m, r + h) - map_forward(m, r - h)) / (2 * h);
      CHECK(std::exp(map_log_jacobian(m, r)) == doctest::Approx(fd).epsilon(1e-7));
      CHECK(map_jacobian(m, r) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("log Jacobian stays finite where the Jacobian underflows") {
  const auto m = TransplantMap::interior(3, 2.0, 1.0);
  const double r = 1e200;
  CHECK(std::isfinite(map_log_jacobian(m, r)));
  CHECK(map_log_jacobian(m, r) == doctest::Approx(-2.0 * std::log(r)).epsilon(1e-12));
  CHECK(chain_quotient(m, 0.0, r) == 0.0);
}

TEST_CASE("weight spot values") {
  const auto m = TransplantMap::interior(3, 2.0, 1.0);
  CHECK(weight_at(m, WeightKind::interior_weight, 0.5) == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(weight_at(m, WeightKind::interior_weight, 0.5, 0.5) == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(log_weight_at(m, WeightKind::interior_weight, 0.5) ==
        doctest::Approx(std::log(16.0)).epsilon(1e-14));
  CHECK(natural_weight(m) == WeightKind::interior_weight);
  const auto e = TransplantMap::exterior(3, 2.0, 1.0);
  CHECK(weight_at(e, WeightKind::exterior_weight, 1.0) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  // A_R at N = 4 (n = 3), p = 2: (1 - s)^4.
  const auto t = TransplantMap::trace(4, 2.0, 1.0);
  CHECK(weight_at(t, WeightKind::trace_A_R, 0.5) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("planar weight") {
  const auto spec = NormSpec::euclidean(3);
  const auto m = TransplantMap::planar(spec, 1.0);
  const double kappa = 4.0 * std::numbers::pi / 3.0;
  const double r = 1.3;
  const double w = 2.0 * std::numbers::pi / (3.0 * kappa) * std::pow(r, -4.0) * std::exp(-2.0 / r);
  CHECK(weight_at(m, WeightKind::planar_W, r) == doctest::Approx(w).epsilon(1e-13));
}

TEST_CASE("transplanted profile composes and differentiates") {
  const auto m = TransplantMap::interior(3, 2.0, 1.0);
  const auto v = transplant_profile(m, gaussian(3));
  CHECK(v.domain() == Domain::ball);
  for (double s : {0.1, 0.5, 0.9}) {
    const double r = map_inverse(m, s);
    CHECK(v.value(s) == doctest::Approx(std::exp(-r * r)).epsilon(1e-13));
    const double h = 1e-6;
    const double fd = (v.value(s + h) - v.value(s - h)) / (2 * h);
    CHECK(v.derivative(s) == doctest::Approx(fd).epsilon(1e-6));
  }
  const auto back = transplant_profile(m, v);
  CHECK(back.value(0.8) == doctest::Approx(std::exp(-0.64)).epsilon(1e-12));
}

TEST_CASE("equivalence checks pass for the gaussian profile") {
  const auto spec = NormSpec::weighted_lq(4.0, {1.0, 2.0, 0.7});
  const auto u = gaussian(3);
  for (const auto& m : {TransplantMap::interior(3, 2.0, 1.0), TransplantMap::exterior(3, 2.0, 1.0)}) {
    const auto e = equivalence_check(m, spec, u, Observable::energy());
    CHECK(e.pass);
    CHECK(std::abs(e.lhs - e.rhs) <= 1e-6 * std::abs(e.rhs));
    const auto f = equivalence_check(
        m, spec, u, Observable::functional([](double x) { return x * x; }, "u^2"));
    CHECK(f.pass);
  }
}

TEST_CASE("map parameter ranges") {
  CHECK_THROWS_AS(TransplantMap::interior(3, 3.0, 1.0), Error);
  CHECK_THROWS_AS(TransplantMap::interior(3, 1.0, 1.0), Error);
  CHECK_THROWS_AS(TransplantMap::trace(3, 2.0, 1.0), Error);
  CHECK_THROWS_AS(TransplantMap::interior(3, 2.0, -1.0), Error);
}
