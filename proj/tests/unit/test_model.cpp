#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pointkg/model.hpp"

using namespace pointkg;

namespace {
const OscillatorModel quartic = OscillatorModel::polynomial({0.0, -1.0, 1.0}, 1.0);
}

TEST_CASE("potential examples") {
  CHECK(quartic.potential(0.0) == doctest::Approx(0.0));
  CHECK(quartic.potential(1.0) == doctest::Approx(0.0));
  CHECK(OscillatorModel::linear(1.0, 1.0).potential(2.0) == doctest::Approx(-2.0));
  // u_0 only shifts the energy.
  CHECK(OscillatorModel::polynomial({0.3, -1.0, 1.0}, 1.0).potential(0.0) == doctest::Approx(0.3));
}

TEST_CASE("force examples") {
  CHECK(std::abs(quartic.force(0.0)) == 0.0);
  CHECK(std::abs(OscillatorModel::linear(1.5, 1.0).force(0.0)) == 0.0);
  const cdouble f = quartic.force(1.0);
  CHECK(f.real() == doctest::Approx(-2.0));
  CHECK(f.imag() == doctest::Approx(0.0));
  const cdouble psi{0.7, 0.2};
  const cdouble rot = std::polar(1.0, std::numbers::pi / 3);
  CHECK(std::abs(quartic.force(rot * psi) - rot * quartic.force(psi)) < 1e-14);
  CHECK(std::abs(OscillatorModel::linear(3.0, 1.0).force(psi) - 3.0 * psi) < 1e-15);
}

TEST_CASE("alpha examples") {
  CHECK(quartic.alpha(0.0) == doctest::Approx(2.0));
  CHECK(quartic.alpha(0.25) == doctest::Approx(1.0));
  CHECK(OscillatorModel::linear(3.0, 1.0).alpha(10.0) == doctest::Approx(3.0));
  CHECK(quartic.alpha_derivative(0.7) == doctest::Approx(-4.0));
  const auto ac = quartic.alpha_coefficients();
  REQUIRE(ac.size() == 2);
  CHECK(ac[0] == doctest::Approx(2.0));
  CHECK(ac[1] == doctest::Approx(-4.0));
}

TEST_CASE("construction rejects models outside the assumptions") {
  CHECK_THROWS(OscillatorModel::polynomial({0.0, 1.0}, 1.0));         // N < 2
  CHECK_THROWS(OscillatorModel::polynomial({0.0, -1.0, -1.0}, 1.0));  // u_N <= 0
  CHECK_THROWS(OscillatorModel::polynomial({0.0, -1.0, 0.0}, 1.0));
  CHECK_THROWS(OscillatorModel::polynomial({0.0, -1.0, 1.0}, 0.0));   // m <= 0
  CHECK_THROWS(OscillatorModel::polynomial({0.0, NAN, 1.0}, 1.0));
  CHECK_THROWS(OscillatorModel::linear(INFINITY, 1.0));
  CHECK_NOTHROW(OscillatorModel::linear(-4.0, 1.0));
  CHECK(quartic.kind() == ModelKind::PolynomialNonlinear);
  CHECK(OscillatorModel::linear(1.0, 1.0).kind() == ModelKind::Linear);
  CHECK(to_string(ModelKind::Linear) == "linear");
}

TEST_CASE("check_bound_below examples") {
  const auto b = check_bound_below(quartic);
  REQUIRE(b.has_value());
  CHECK(b->B == 0.0);
  CHECK(b->A == doctest::Approx(-0.25).epsilon(1e-14));

  const auto lin = check_bound_below(OscillatorModel::linear(1.9, 1.0));
  REQUIRE(lin.has_value());
  CHECK(lin->B == doctest::Approx(0.95));
  CHECK(lin->B < 1.0);
  CHECK_FALSE(check_bound_below(OscillatorModel::linear(2.0, 1.0)).has_value());
  CHECK_FALSE(check_bound_below(OscillatorModel::linear(2.5, 1.0)).has_value());
  const auto neg = check_bound_below(OscillatorModel::linear(-1.0, 1.0));
  REQUIRE(neg.has_value());
  CHECK(neg->B == 0.0);
}

TEST_CASE("check_bound_below on a sextic with two wells") {
  // u(s) = s - 3 s^2 + s^3 on s >= 0: critical points 1 +- sqrt(2/3).
  const OscillatorModel m = OscillatorModel::polynomial({0.0, 1.0, -3.0, 1.0}, 2.0);
  const auto b = check_bound_below(m);
  REQUIRE(b.has_value());
  double brute = 0.0;
  for (int i = 0; i <= 400000; ++i) {
    const double s = 4.0 * i / 400000.0;
    brute = std::min(brute, s - 3 * s * s + s * s * s);
  }
  CHECK(b->A <= brute + 1e-12);
  CHECK(b->A == doctest::Approx(brute).epsilon(1e-9));
  for (int i = 0; i < 200; ++i) {
    const double r = 0.02 * i;
    CHECK(m.potential(r) >= b->A - b->B * r * r - 1e-12);
  }
}

TEST_CASE("apriori bound formula") {
  const BoundBelow b{-0.25, 0.0};
  CHECK(apriori_norm_bound_sq(quartic, b, 0.3125) == doctest::Approx(2.0 * (0.3125 + 0.25)));
}
