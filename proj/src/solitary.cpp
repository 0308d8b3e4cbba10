#include "pointkg/solitary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "pointkg/observables.hpp"
#include "pointkg/polynomial.hpp"

namespace pointkg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

SolitaryWave make_wave(double amplitude, double kappa, double omega) {
  SolitaryWave w;
  w.amplitude = amplitude;
  w.kappa = kappa;
  w.omega = omega;
  w.branch = omega < 0.0 ? Branch::Minus : Branch::Plus;
  return w;
}

}  // namespace

std::vector<SolitaryWave> waves_from_amplitude(const OscillatorModel& model, double amplitude) {
  std::vector<SolitaryWave> out;
  if (!(amplitude > 0.0)) return out;
  const double m = model.mass();
  const double kappa = 0.5 * model.alpha(amplitude * amplitude);
  if (!(kappa > 0.0) || kappa > m) return out;
  const double omega = std::sqrt(std::max(0.0, (m - kappa) * (m + kappa)));
  out.push_back(make_wave(amplitude, kappa, omega));
  if (omega > 0.0) out.push_back(make_wave(amplitude, kappa, -omega));
  return out;
}

std::optional<double> linear_bound_frequency(const OscillatorModel& model) {
  if (model.kind() != ModelKind::Linear) return std::nullopt;
  const double a = model.linear_coupling();
  const double m = model.mass();
  if (!(a > 0.0) || !(a < 2.0 * m)) return std::nullopt;
  return std::sqrt(m * m - 0.25 * a * a);
}

WavesAtOmega waves_at_omega(const OscillatorModel& model, double omega) {
  WavesAtOmega result;
  const double m = model.mass();
  if (!(std::abs(omega) < m)) return result;
  const double kappa = std::sqrt((m - omega) * (m + omega));
  result.kappa = kappa;

  if (model.kind() == ModelKind::Linear) {
    const auto wa = linear_bound_frequency(model);
    if (wa && std::abs(std::abs(omega) - *wa) <= 1e-12 * m) result.any_amplitude = true;
    return result;
  }

  std::vector<double> q = model.alpha_coefficients();
  q[0] -= 2.0 * kappa;
  const Polynomial poly(std::move(q));
  const double s_max = std::max(1.0, poly.root_bound());
  for (double s : poly.real_roots(0.0, s_max, 1e-15)) {
    if (s <= 1e-14) continue;
    const double c = std::sqrt(s);
    if (!result.waves.empty() && std::abs(c - result.waves.back().amplitude) <= 1e-12) continue;
    result.waves.push_back(make_wave(c, kappa, omega));
  }
  return result;
}

FieldState sample_profile(const SolitaryWave& wave, const Grid& grid, double t) {
  FieldState s(grid, t);
  const cdouble phase = std::polar(wave.amplitude, wave.phase - wave.omega * t);
  const cdouble dot = cdouble(0.0, -wave.omega);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    s.psi[i] = phase * std::exp(-wave.kappa * std::abs(grid.x(i)));
    s.pi[i] = dot * s.psi[i];
  }
  return s;
}

namespace {

struct Candidate {
  double rho;
  SolitaryWave wave;
};

// Best phase for a fixed unit-phase profile, and the resulting distance computed
// directly from the difference (no cancellation in rho^2 = |a|^2 + |b|^2 - 2|<a,b>|).
Candidate fit_phase(const FieldState& local, SolitaryWave wave, double m) {
  wave.phase = 0.0;
  FieldState profile = sample_profile(wave, local.grid);
  const cdouble overlap = inner_e(profile, local, m);
  const double theta = std::abs(overlap) > 0.0 ? std::arg(overlap) : 0.0;
  wave.phase = wrap_phase(theta);
  const cdouble rot = std::polar(1.0, theta);
  for (std::size_t i = 0; i < local.grid.size(); ++i) {
    profile.psi[i] = local.psi[i] - rot * profile.psi[i];
    profile.pi[i] = local.pi[i] - rot * profile.pi[i];
  }
  return {norm_e(profile, m), wave};
}

std::optional<Candidate> best_at_omega(const OscillatorModel& model, const FieldState& local, double omega) {
  std::optional<Candidate> best;
  for (const SolitaryWave& w : waves_at_omega(model, omega).waves) {
    Candidate c = fit_phase(local, w, model.mass());
    if (!best || c.rho < best->rho) best = c;
  }
  return best;
}

ManifoldDistance linear_distance(const OscillatorModel& model, const FieldState& local) {
  const double m = model.mass();
  ManifoldDistance out;
  out.rho = norm_e(local, m);
  const auto wa = linear_bound_frequency(model);
  if (!wa) return out;
  const double kappa = 0.5 * model.linear_coupling();

  const FieldState plus = sample_profile(make_wave(1.0, kappa, *wa), local.grid);
  const FieldState minus = sample_profile(make_wave(1.0, kappa, -*wa), local.grid);
  const cdouble g11 = inner_e(plus, plus, m);
  const cdouble g12 = inner_e(plus, minus, m);
  const cdouble g22 = inner_e(minus, minus, m);
  const cdouble b1 = inner_e(plus, local, m);
  const cdouble b2 = inner_e(minus, local, m);
  const cdouble det = g11 * g22 - g12 * std::conj(g12);
  const cdouble c1 = (g22 * b1 - g12 * b2) / det;
  const cdouble c2 = (g11 * b2 - std::conj(g12) * b1) / det;

  FieldState residual = local;
  for (std::size_t i = 0; i < local.grid.size(); ++i) {
    residual.psi[i] -= c1 * plus.psi[i] + c2 * minus.psi[i];
    residual.pi[i] -= c1 * plus.pi[i] + c2 * minus.pi[i];
  }
  const double rho = norm_e(residual, m);
  if (rho < out.rho) {
    out.rho = rho;
    out.c_plus = c1;
    out.c_minus = c2;
    const bool plus_dominant = std::abs(c1) >= std::abs(c2);
    SolitaryWave w = make_wave(std::abs(plus_dominant ? c1 : c2), kappa, plus_dominant ? *wa : -*wa);
    w.phase = wrap_phase(std::arg(plus_dominant ? c1 : c2));
    out.best = w;
  }
  return out;
}

}  // namespace

ManifoldDistance distance_to_manifold(const OscillatorModel& model, const FieldState& state, double radius) {
  if (radius > state.grid.half_extent() * (1.0 + 1e-12)) throw std::invalid_argument("distance: radius exceeds grid");
  const FieldState local = state.cropped(radius);
  if (model.kind() == ModelKind::Linear) return linear_distance(model, local);

  const double m = model.mass();
  ManifoldDistance out;
  out.rho = norm_e(local, m);  // the zero wave

  constexpr int kScan = 401;
  const double lo = -m + 1e-6;
  const double hi = m - 1e-6;
  const double step = (hi - lo) / (kScan - 1);
  std::optional<Candidate> best;
  double best_omega = 0.0;
  for (int i = 0; i < kScan; ++i) {
    const double omega = lo + step * i;
    auto c = best_at_omega(model, local, omega);
    if (c && (!best || c->rho < best->rho)) {
      best = c;
      best_omega = omega;
    }
  }

  if (best) {
    // Golden-section refinement on the lower envelope around the best scan point.
    auto objective = [&](double omega) {
      auto c = best_at_omega(model, local, omega);
      return c ? c->rho : INFINITY;
    };
    double a = std::max(lo, best_omega - step);
    double b = std::min(hi, best_omega + step);
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = objective(x1);
    double f2 = objective(x2);
    for (int it = 0; it < 200 && b - a > 1e-13 * m; ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = objective(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = objective(x2);
      }
    }
    auto refined = best_at_omega(model, local, f1 <= f2 ? x1 : x2);
    if (refined && refined->rho < best->rho) best = refined;
    if (best->rho < out.rho) {
      out.rho = best->rho;
      out.best = best->wave;
    }
  }
  return out;
}

}  // namespace pointkg
