#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pointkg/observables.hpp"
#include "pointkg/polynomial.hpp"
#include "pointkg/solitary.hpp"
#include "pointkg/spectral.hpp"
#include "pointkg/volterra.hpp"

using namespace pointkg;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

OscillatorModel random_polynomial_model(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> degree(2, 5);
  std::vector<double> c(static_cast<std::size_t>(degree(gen)) + 1);
  for (auto& v : c) v = u(gen);
  c.back() = std::abs(c.back()) + 0.1;
  return OscillatorModel::polynomial(c, std::uniform_real_distribution<double>(0.3, 2.0)(gen));
}

cdouble random_point(std::mt19937_64& gen, double scale = 1.5) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(gen), u(gen)};
}

FieldState gaussian(const Grid& g, cdouble A, double w, double x0, double omega_bar) {
  FieldState s(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = g.x(i) - x0;
    s.psi[i] = A * std::exp(-0.5 * d * d / (w * w));
    s.pi[i] = cdouble(0.0, -omega_bar) * s.psi[i];
  }
  return s;
}

}  // namespace

TEST_CASE("gauge equivariance of the force and invariance of the potential") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int trial = 0; trial < 1000; ++trial) {
    const OscillatorModel m = trial % 5 == 0 ? OscillatorModel::linear(angle(gen) - 3.0, 1.0) : random_polynomial_model(gen);
    const cdouble psi = random_point(gen);
    const cdouble rot = std::polar(1.0, angle(gen));
    const cdouble f = m.force(psi);
    CHECK(std::abs(m.force(rot * psi) - rot * f) <= 1e-12 * std::max(1.0, std::abs(f)));
    CHECK(std::abs(m.potential(rot * psi) - m.potential(psi)) <= 1e-12 * std::max(1.0, std::abs(m.potential(psi))));
  }
}

TEST_CASE("force is minus the gradient of the potential and alpha(|psi|^2) psi") {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 500; ++trial) {
    const OscillatorModel m = random_polynomial_model(gen);
    const cdouble psi = random_point(gen, 1.0);
    const double e = 1e-5;
    const double dre = (m.potential(psi + e) - m.potential(psi - e)) / (2 * e);
    const double dim = (m.potential(psi + cdouble(0, e)) - m.potential(psi - cdouble(0, e))) / (2 * e);
    const cdouble f = m.force(psi);
    CHECK(std::abs(f + cdouble(dre, dim)) <= 1e-6 * std::max(1.0, std::abs(f)));
    CHECK(std::abs(f - m.alpha(std::norm(psi)) * psi) <= 1e-13 * std::max(1.0, std::abs(f)));
    const double s = std::norm(psi);
    const double da = (m.alpha(s + 1e-6) - m.alpha(s - 1e-6)) / 2e-6;
    CHECK(m.alpha_derivative(s) == doctest::Approx(da).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("lower bound constants hold pointwise") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    const OscillatorModel m = random_polynomial_model(gen);
    const auto b = check_bound_below(m);
    REQUIRE(b.has_value());
    CHECK(b->B >= 0.0);
    CHECK(b->B < m.mass());
    for (int i = 0; i < 200; ++i) {
      const cdouble psi = random_point(gen, 3.0);
      CHECK(m.potential(psi) >= b->A - b->B * std::norm(psi) - 1e-12 * std::max(1.0, std::abs(m.potential(psi))));
    }
  }
  for (double a : {-1.0, 0.0, 0.5, 1.9}) {
    const auto b = check_bound_below(OscillatorModel::linear(a, 1.0));
    REQUIRE(b.has_value());
    CHECK(b->B < 1.0);
  }
  CHECK_FALSE(check_bound_below(OscillatorModel::linear(2.0, 1.0)).has_value());
}

TEST_CASE("real roots of random polynomials with known roots") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> roots(static_cast<std::size_t>(1 + trial % 5));
    for (auto& r : roots) r = u(gen);
    std::sort(roots.begin(), roots.end());
    bool separated = true;
    for (std::size_t i = 1; i < roots.size(); ++i) separated = separated && roots[i] - roots[i - 1] > 1e-3;
    if (!separated) continue;
    std::vector<double> c{1.0};
    for (double r : roots) {
      std::vector<double> next(c.size() + 1, 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i] -= r * c[i];
        next[i + 1] += c[i];
      }
      c = next;
    }
    const Polynomial p(c);
    CHECK(p.root_bound() >= std::max(std::abs(roots.front()), std::abs(roots.back())));
    const auto found = p.real_roots(-4.0, 4.0);
    REQUIRE(found.size() == roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) CHECK(found[i] == doctest::Approx(roots[i]).epsilon(1e-8));
  }
}

TEST_CASE("k(omega)^2 = omega^2 - m^2 on a dense grid") {
  for (double m : {0.5, 1.0, 2.0}) {
    for (int i = -4000; i <= 4000; ++i) {
      const double omega = 5.0 * i / 4000.0;
      const cdouble k = k_of_omega(omega, m);
      CHECK(std::abs(k * k - (omega * omega - m * m)) <= 1e-14 * std::max(1.0, omega * omega));
      CHECK(k.imag() >= 0.0);
      if (std::abs(omega) > m) CHECK(k.real() * omega > 0.0);
      CHECK(std::abs(kappa_of_omega(omega, m) - cdouble(0, -1) * k) < 1e-15);
      CHECK(ac_weight(omega, m) >= 0.0);
    }
  }
}

TEST_CASE("solitary round trip amplitude -> omega -> amplitude") {
  std::mt19937_64 gen(5);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const OscillatorModel m = random_polynomial_model(gen);
    const double C = std::uniform_real_distribution<double>(0.05, 2.0)(gen);
    for (const SolitaryWave& w : waves_from_amplitude(m, C)) {
      ++checked;
      CHECK(w.kappa > 0.0);
      CHECK(std::abs(w.omega) < m.mass());
      CHECK(std::abs(w.kappa * w.kappa + w.omega * w.omega - m.mass() * m.mass()) < 1e-10);
      CHECK(std::abs(m.alpha(C * C) - 2.0 * w.kappa) < 1e-10);
      CHECK((w.omega >= 0.0) == (w.branch == Branch::Plus));
      if (w.omega == 0.0) continue;
      const auto back = waves_at_omega(m, w.omega).waves;
      const bool found = std::any_of(back.begin(), back.end(), [&](const SolitaryWave& b) {
        return std::abs(b.amplitude - C) < 1e-10 * std::max(1.0, C);
      });
      CHECK(found);
      for (const SolitaryWave& b : back) CHECK(std::abs(m.alpha(b.amplitude * b.amplitude) - 2.0 * b.kappa) < 1e-10);
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("gauge orbit of solitary profiles") {
  const OscillatorModel m = OscillatorModel::polynomial({0.0, -1.0, 1.0}, 1.0);
  const Grid g = Grid::with_spacing(12.0, 0.05);
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int trial = 0; trial < 20; ++trial) {
    const double C = std::uniform_real_distribution<double>(0.1, 0.65)(gen);
    const auto waves = waves_from_amplitude(m, C);
    REQUIRE_FALSE(waves.empty());
    SolitaryWave w = waves[trial % waves.size()];
    const FieldState base = sample_profile(w, g);
    w.phase = angle(gen);
    const FieldState turned = sample_profile(w, g);
    const FieldState rotated = base.rotated(w.phase);
    double diff = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      diff = std::max(diff, std::abs(turned.psi[i] - rotated.psi[i]) + std::abs(turned.pi[i] - rotated.pi[i]));
    }
    CHECK(diff < 1e-10);
    CHECK(std::abs(energy(m, turned) - energy(m, base)) < 1e-10);
    CHECK(std::abs(charge(turned) - charge(base)) < 1e-10);
    CHECK(std::abs(norm_e(turned, 1.0, 5.0) - norm_e(base, 1.0, 5.0)) < 1e-10);

    // Distance is gauge invariant, and a perturbed wave is seen at the same distance.
    FieldState bumped = base;
    for (std::size_t i = 0; i < g.size(); ++i) bumped.psi[i] += 0.02 * std::exp(-(g.x(i) - 1.0) * (g.x(i) - 1.0));
    const double theta = angle(gen);
    const ManifoldDistance d0 = distance_to_manifold(m, bumped, 5.0);
    const ManifoldDistance d1 = distance_to_manifold(m, bumped.rotated(theta), 5.0);
    CHECK(std::abs(d0.rho - d1.rho) < 1e-10);
    REQUIRE(d0.best.has_value());
    REQUIRE(d1.best.has_value());
    CHECK(std::abs(std::remainder(d1.best->phase - d0.best->phase - theta, kTwoPi)) < 1e-6);
  }
}

TEST_CASE("Parseval identity on random traces") {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 50; ++trial) {
    TraceSeries tr;
    tr.dt = std::uniform_real_distribution<double>(0.005, 0.1)(gen);
    const std::size_t n = 64 + gen() % 3000;
    for (std::size_t k = 0; k < n; ++k) tr.z.emplace_back(n01(gen), n01(gen));
    const double t0 = tr.time(gen() % (n / 2));
    const double width = tr.duration() - t0;
    const WindowKind kind = trial % 2 ? WindowKind::Hann : WindowKind::Rect;
    const SpectrumEstimate s = windowed_spectrum(tr, t0 + 0.5 * width, width, kind);
    const auto first = static_cast<std::size_t>(std::lround(t0 / tr.dt));
    double e = 0.0;
    for (std::size_t k = 0; k < s.samples; ++k) {
      const double a = std::sin(std::numbers::pi * k / (s.samples - 1.0));
      e += std::norm((kind == WindowKind::Hann ? a * a : 1.0) * tr.z[first + k]);
    }
    CHECK(s.total_mass() == doctest::Approx(kTwoPi * tr.dt * e).epsilon(1e-8));
    const double gap = gap_mass_fraction(s, 1.0);
    CHECK(gap >= 0.0);
    CHECK(gap <= 1.0);
  }
}

TEST_CASE("Titchmarsh endpoint identity on random integer sequences") {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<std::int64_t> coef(-1000, 1000);
  std::uniform_int_distribution<std::int64_t> offset(-50, 50);
  for (int trial = 0; trial < 10000; ++trial) {
    IntegerSequence a, g;
    a.values.resize(1 + gen() % 20);
    g.values.resize(1 + gen() % 20);
    for (auto& v : a.values) v = gen() % 3 == 0 ? 0 : coef(gen);
    for (auto& v : g.values) v = gen() % 3 == 0 ? 0 : coef(gen);
    a.values[gen() % a.values.size()] = 1 + gen() % 7;
    g.values[gen() % g.values.size()] = -1 - static_cast<std::int64_t>(gen() % 7);
    a.offset = offset(gen);
    g.offset = offset(gen);
    CHECK(titchmarsh_check(a, g).endpoint_identity_holds);
  }
}

TEST_CASE("trajectories respect the a priori energy bound") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const OscillatorModel models[] = {OscillatorModel::polynomial({0.0, -1.0, 1.0}, 1.0),
                                    OscillatorModel::polynomial({0.1, -0.5, -0.5, 0.4}, 1.0),
                                    OscillatorModel::linear(1.0, 1.0)};
  std::size_t violations = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const OscillatorModel& m = models[trial % 3];
    const double T = 10.0;
    const FieldState init = gaussian(Grid::with_spacing(25.0, 0.1), std::polar(0.3 + 0.5 * u(gen), kTwoPi * u(gen)),
                                     0.7 + 0.8 * u(gen), 4.0 * u(gen) - 2.0, 2.0 * u(gen) - 1.0);
    const auto bound = check_bound_below(m);
    REQUIRE(bound.has_value());
    const double b2 = apriori_norm_bound_sq(m, *bound, energy(m, init));
    SolveOptions opt;
    opt.drift_tolerance = 1.0;
    const auto [rep, snaps] = solve_full(m, init, T, 0.01, {2.5, 5.0, 7.5, 10.0}, opt);
    CHECK(rep.status == SolveStatus::Completed);
    for (const FieldState& s : snaps) {
      if (std::pow(norm_e(s, m.mass()), 2) > b2) ++violations;
    }
  }
  CHECK(violations == 0);
}
