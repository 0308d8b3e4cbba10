#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "pointkg/observables.hpp"
#include "pointkg/solitary.hpp"

using namespace pointkg;

namespace {
const OscillatorModel quartic = OscillatorModel::polynomial({0.0, -1.0, 1.0}, 1.0);
const double w0 = std::sqrt(0.75);
}  // namespace

TEST_CASE("waves_from_amplitude examples") {
  const auto waves = waves_from_amplitude(quartic, 0.5);
  REQUIRE(waves.size() == 2);
  CHECK(waves[0].kappa == doctest::Approx(0.5));
  CHECK(waves[0].omega == doctest::Approx(w0));
  CHECK(waves[0].branch == Branch::Plus);
  CHECK(waves[1].omega == doctest::Approx(-w0));
  CHECK(waves[1].branch == Branch::Minus);
  CHECK(waves_from_amplitude(quartic, 1.0).empty());
  for (double C : {0.1, 0.5, 1.0, 3.0}) CHECK(waves_from_amplitude(OscillatorModel::linear(-1.0, 1.0), C).empty());
  CHECK(waves_from_amplitude(quartic, 0.0).empty());
  // alpha(C^2) = 2 m gives kappa = m and the single wave omega = 0.
  const OscillatorModel steep = OscillatorModel::polynomial({0.0, -1.0, 1.0}, 0.5);
  const auto single = waves_from_amplitude(steep, std::sqrt(0.25));
  REQUIRE(single.size() == 1);
  CHECK(single[0].omega == 0.0);
}

TEST_CASE("waves_at_omega examples") {
  const auto at = waves_at_omega(quartic, w0);
  REQUIRE(at.waves.size() == 1);
  CHECK(at.waves[0].amplitude == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(at.any_amplitude);
  CHECK(waves_at_omega(quartic, 0.0).waves.empty());
  CHECK(waves_at_omega(quartic, 1.0).waves.empty());

  const OscillatorModel lin = OscillatorModel::linear(1.0, 1.0);
  const auto fam = waves_at_omega(lin, w0);
  CHECK(fam.any_amplitude);
  CHECK(fam.waves.empty());
  CHECK(fam.kappa == doctest::Approx(0.5));
  CHECK(waves_at_omega(lin, -w0).any_amplitude);
  CHECK_FALSE(waves_at_omega(lin, 0.3).any_amplitude);
  REQUIRE(linear_bound_frequency(lin).has_value());
  CHECK(*linear_bound_frequency(lin) == doctest::Approx(w0));
  CHECK_FALSE(linear_bound_frequency(OscillatorModel::linear(-1.0, 1.0)).has_value());
  CHECK_FALSE(linear_bound_frequency(quartic).has_value());
}

TEST_CASE("waves_at_omega finds several amplitudes") {
  // alpha(s) = -2 u1 - 4 u2 s - 6 u3 s^2 with u = [0, -1, 1.2, -0.5, 0.1]:
  // a quartic-in-s alpha may cross 2 kappa more than once.
  const OscillatorModel m = OscillatorModel::polynomial({0.0, -0.2, 1.2, -1.0, 0.25}, 1.0);
  for (double omega : {0.1, 0.5, 0.9}) {
    const auto at = waves_at_omega(m, omega);
    const double kappa = std::sqrt(1.0 - omega * omega);
    for (const auto& w : at.waves) {
      CHECK(m.alpha(w.amplitude * w.amplitude) == doctest::Approx(2.0 * kappa).epsilon(1e-10));
    }
    // Independent count of sign changes of alpha(s) - 2 kappa on a fine grid.
    int changes = 0;
    double prev = m.alpha(1e-9) - 2.0 * kappa;
    for (int i = 1; i <= 200000; ++i) {
      const double s = 1e-9 + 20.0 * i / 200000.0;
      const double v = m.alpha(s) - 2.0 * kappa;
      if ((v < 0) != (prev < 0)) ++changes;
      prev = v;
    }
    CHECK(at.waves.size() == static_cast<std::size_t>(changes));
  }
}

TEST_CASE("sample_profile examples") {
  const Grid g = Grid::with_spacing(60.0, 0.05);
  const SolitaryWave w = waves_from_amplitude(quartic, 0.5).front();
  const FieldState s = sample_profile(w, g);
  CHECK(s.psi[g.center()].real() == doctest::Approx(0.5));
  double max_abs = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::abs(s.psi[i].imag()) < 1e-16);
    CHECK(s.psi[i].real() > 0.0);
    CHECK(s.psi[i] == s.psi[g.size() - 1 - i]);
    max_abs = std::max(max_abs, std::abs(s.psi[i]));
    CHECK(std::abs(s.pi[i] - cdouble(0.0, -w.omega) * s.psi[i]) < 1e-16);
  }
  CHECK(max_abs == 0.5);

  const double exact = oracle::solitary_norm_sq(0.5, w.kappa, w.omega, 1.0);
  CHECK(std::pow(norm_e(s, 1.0), 2) == doctest::Approx(exact).epsilon(1e-6));

  SolitaryWave shifted = w;
  shifted.phase = 1.0;
  const FieldState t = sample_profile(shifted, g, 2.0);
  CHECK(std::abs(t.psi[g.center()] - 0.5 * std::polar(1.0, 1.0 - w.omega * 2.0)) < 1e-15);
}

TEST_CASE("discrete jump condition converges to -F(phi(0))") {
  const SolitaryWave w = waves_from_amplitude(quartic, 0.5).front();
  const double target = -quartic.force(0.5).real();
  double prev_err = INFINITY;
  for (double h : {0.1, 0.05, 0.025}) {
    const FieldState s = sample_profile(w, Grid::with_spacing(10.0, h));
    const std::size_t c = s.grid.center();
    const double jump = ((s.psi[c + 1] - s.psi[c]) - (s.psi[c] - s.psi[c - 1])).real() / h;
    const double err = std::abs(jump - target);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 1e-2);
}

TEST_CASE("distance_to_manifold examples") {
  const Grid g = Grid::with_spacing(12.0, 0.05);
  SolitaryWave w = waves_from_amplitude(quartic, 0.5).front();
  w.phase = 2.2;
  const FieldState s = sample_profile(w, g);
  const ManifoldDistance d = distance_to_manifold(quartic, s, 5.0);
  CHECK(d.rho < 1e-8);
  REQUIRE(d.best.has_value());
  CHECK(d.best->amplitude == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(d.best->omega == doctest::Approx(w.omega).epsilon(1e-6));
  CHECK(std::abs(std::remainder(d.best->phase - 2.2, 2.0 * std::numbers::pi)) < 1e-6);

  const ManifoldDistance z = distance_to_manifold(quartic, FieldState(g), 5.0);
  CHECK(z.rho == 0.0);
  CHECK_FALSE(z.best.has_value());

  FieldState bumped = s;
  FieldState bump(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d2 = (g.x(i) - 1.5) * (g.x(i) - 1.5);
    bump.psi[i] = cdouble(0.01, 0.004) * std::exp(-d2);
    bumped.psi[i] += bump.psi[i];
  }
  const double eps = norm_e(bump, 1.0, 5.0);
  CHECK(distance_to_manifold(quartic, bumped, 5.0).rho <= eps);
  CHECK_THROWS(distance_to_manifold(quartic, s, 20.0));
}

TEST_CASE("linear distance projects onto the two bound profiles") {
  const OscillatorModel lin = OscillatorModel::linear(1.0, 1.0);
  const Grid g = Grid::with_spacing(12.0, 0.05);
  FieldState s(g);
  const cdouble c1{0.3, -0.1}, c2{0.05, 0.2};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double phi = std::exp(-0.5 * std::abs(g.x(i)));
    s.psi[i] = (c1 + c2) * phi;
    s.pi[i] = cdouble(0.0, -w0) * (c1 - c2) * phi;
  }
  const ManifoldDistance d = distance_to_manifold(lin, s, 5.0);
  CHECK(d.rho < 1e-10);
  CHECK(std::abs(d.c_plus - c1) < 1e-10);
  CHECK(std::abs(d.c_minus - c2) < 1e-10);
}
