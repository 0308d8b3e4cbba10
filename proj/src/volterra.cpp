#include "pointkg/volterra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pointkg/observables.hpp"
#include "quadrature.hpp"

namespace pointkg {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Completed: return "completed";
    case SolveStatus::EnergyDriftExceeded: return "energy_drift_exceeded";
    case SolveStatus::NonFinite: return "non_finite";
  }
  return "unknown";
}

double relative_drift(double value, double reference, double scale) {
  const double denom = std::abs(reference) > 1e-12 * std::abs(scale) ? std::abs(reference) : std::abs(scale);
  if (denom == 0.0) return std::abs(value - reference);
  return std::abs(value - reference) / denom;
}

namespace {

bool finite(cdouble v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

std::size_t step_count(double T, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("solve: dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("solve: T must be non-negative");
  const double ratio = T / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("solve: T must be an integer multiple of dt");
  }
  return static_cast<std::size_t>(rounded);
}

// Solves z = b + c F(z) for the implicit trapezoid node.
struct ImplicitStep {
  const OscillatorModel& model;
  double c;

  cdouble residual(cdouble z, cdouble b) const { return z - b - c * model.force(z); }

  std::optional<cdouble> solve(cdouble b, cdouble guess) const {
    auto tol = [](cdouble z) { return 1e-12 * std::max(1.0, std::abs(z)); };
    cdouble z = guess;
    double prev = INFINITY;
    for (int it = 0; it < 60; ++it) {
      const cdouble next = b + c * model.force(z);
      if (!finite(next)) break;
      const double change = std::abs(next - z);
      z = next;
      if (std::abs(residual(z, b)) < tol(z)) return z;
      if (change > prev && it > 3) break;
      prev = change;
    }
    // Damped Newton on the real 2x2 system G(u, v) = 0, exact Jacobian.
    z = guess;
    for (int it = 0; it < 100; ++it) {
      const cdouble g = residual(z, b);
      if (!finite(g)) return std::nullopt;
      if (std::abs(g) < tol(z)) return z;
      const double s = std::norm(z);
      const double a = model.alpha(s);
      const double da = model.alpha_derivative(s);
      const double u = z.real();
      const double v = z.imag();
      const double j11 = 1.0 - c * (a + 2.0 * da * u * u);
      const double j12 = -c * (2.0 * da * u * v);
      const double j21 = j12;
      const double j22 = 1.0 - c * (a + 2.0 * da * v * v);
      const double det = j11 * j22 - j12 * j21;
      if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
      const cdouble delta((j22 * g.real() - j12 * g.imag()) / det, (-j21 * g.real() + j11 * g.imag()) / det);
      double lambda = 1.0;
      cdouble trial = z - delta;
      while (lambda > 1e-6 && !(std::abs(residual(trial, b)) < std::abs(g))) {
        lambda *= 0.5;
        trial = z - lambda * delta;
      }
      z = trial;
    }
    if (std::abs(residual(z, b)) < tol(z)) return z;
    return std::nullopt;
  }
};

// Local quintic Lagrange interpolation of f on the uniform trace grid,
// restricted to samples 0..last.
struct SourceInterpolant {
  const std::vector<cdouble>& f;
  double dt;
  std::size_t last;

  // Returns {f(s), f'(s)}.
  std::pair<cdouble, cdouble> operator()(double s) const {
    const std::size_t count = last + 1;
    const std::size_t width = std::min<std::size_t>(6, count);
    const double pos = s / dt;
    long base = static_cast<long>(std::floor(pos)) - static_cast<long>(width / 2) + 1;
    base = std::clamp(base, 0L, static_cast<long>(count - width));
    const double u = pos - static_cast<double>(base);
    cdouble value = 0.0;
    cdouble slope = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      double w = 1.0;
      double dw = 0.0;
      double denom = 1.0;
      for (std::size_t l = 0; l < width; ++l) {
        if (l == j) continue;
        const double d = u - static_cast<double>(l);
        dw = dw * d + w;
        w *= d;
        denom *= static_cast<double>(j) - static_cast<double>(l);
      }
      const cdouble fj = f[static_cast<std::size_t>(base) + j];
      value += fj * (w / denom);
      slope += fj * (dw / denom);
    }
    return {value, slope / dt};
  }
};

}  // namespace

SolveReport solve_trace(const OscillatorModel& model, const FieldState& initial, double T, double dt,
                        const SolveOptions& options) {
  const std::size_t n = step_count(T, dt);
  if (!initial.is_finite()) throw std::invalid_argument("solve: non-finite initial data");
  check_horizon(initial, T, options.horizon_margin);

  const double m = model.mass();
  SolveReport report;
  TraceSeries& tr = report.trace;
  tr.dt = dt;

  const std::vector<cdouble> h = FreeEvolution(initial, m).trace_uniform(dt, n);
  std::vector<double> kernel(n + 1);
  for (std::size_t j = 0; j <= n; ++j) kernel[j] = bessel_j0(m * static_cast<double>(j) * dt);
  // Reversed copy so the history sum streams both arrays forward.
  std::vector<double> kernel_rev(kernel.rbegin(), kernel.rend());

  double sup_bound = INFINITY;
  const double energy0 = energy(model, initial);
  if (auto bound = check_bound_below(model)) {
    sup_bound = std::sqrt(std::max(0.0, (energy0 - bound->A) / (m - bound->B)));
  }

  tr.z.reserve(n + 1);
  tr.f.reserve(n + 1);
  std::vector<double> f_re;
  std::vector<double> f_im;
  f_re.reserve(n + 1);
  f_im.reserve(n + 1);

  auto push = [&](cdouble z) {
    const cdouble f = model.force(z);
    tr.z.push_back(z);
    tr.f.push_back(f);
    f_re.push_back(f.real());
    f_im.push_back(f.imag());
  };
  push(initial.psi[initial.grid.center()]);

  const ImplicitStep implicit{model, 0.25 * dt * kernel[0]};
  for (std::size_t k = 1; k <= n; ++k) {
    // sum_{j=1}^{k-1} K_{k-j} f_j  with K_{k-j} = kernel_rev[n - k + j].
    const double* kr = kernel_rev.data() + (n - k);
    double sre = 0.0;
    double sim = 0.0;
    for (std::size_t j = 1; j < k; ++j) {
      sre += kr[j] * f_re[j];
      sim += kr[j] * f_im[j];
    }
    const cdouble history = cdouble(sre, sim) + 0.5 * kernel[k] * tr.f[0];
    const cdouble b = h[k] + 0.5 * dt * history;
    const cdouble guess = k >= 2 ? 2.0 * tr.z[k - 1] - tr.z[k - 2] : tr.z[k - 1];
    const auto z = implicit.solve(b, guess);
    if (!z) {
      report.status = SolveStatus::NonFinite;
      std::ostringstream msg;
      msg << "implicit step failed to converge at t=" << tr.time(k);
      report.diagnostic = msg.str();
      return report;
    }
    if (std::abs(*z) > options.magnitude_slack * sup_bound + 1e-12) {
      push(*z);
      report.status = SolveStatus::EnergyDriftExceeded;
      std::ostringstream msg;
      msg << "|psi(0,t)| = " << std::abs(*z) << " exceeds the energy bound " << sup_bound << " at t=" << tr.time(k);
      report.diagnostic = msg.str();
      return report;
    }
    push(*z);
  }

  if (!options.monitor_times.empty()) {
    const double q0 = charge(initial);
    const double e_scale = 0.5 * inner_e(initial, initial, m).real() + std::abs(model.potential(tr.z[0]));
    const double q_scale = std::sqrt(l2_norm_sq(initial.psi, initial.grid) * l2_norm_sq(initial.pi, initial.grid));
    report.energy_samples.push_back({0.0, energy0});
    report.charge_samples.push_back({0.0, q0});
    for (double t : options.monitor_times) {
      if (t <= 0.0) continue;
      const FieldState s = reconstruct_field(model, initial, tr, t, std::nullopt, options.panel_width,
                                             options.horizon_margin);
      const double e = energy(model, s);
      const double q = charge(s);
      report.energy_samples.push_back({t, e});
      report.charge_samples.push_back({t, q});
      report.max_energy_drift = std::max(report.max_energy_drift, relative_drift(e, energy0, e_scale));
      report.max_charge_drift = std::max(report.max_charge_drift, relative_drift(q, q0, q_scale));
    }
    if (report.max_energy_drift > options.drift_tolerance) {
      report.status = SolveStatus::EnergyDriftExceeded;
      std::ostringstream msg;
      msg << "relative energy drift " << report.max_energy_drift << " exceeds " << options.drift_tolerance;
      report.diagnostic = msg.str();
    }
  }
  return report;
}

FieldState reconstruct_field(const OscillatorModel& model, const FieldState& initial, const TraceSeries& trace,
                             double t, std::optional<double> radius, double panel_width, double horizon_margin) {
  if (trace.size() == 0) throw std::invalid_argument("reconstruct: empty trace");
  const double kd = t / trace.dt;
  const double kr = std::round(kd);
  if (t < 0.0 || std::abs(kd - kr) > 1e-9 * std::max(1.0, kd)) {
    throw std::invalid_argument("reconstruct: t must lie on the trace grid");
  }
  const auto k = static_cast<std::size_t>(kr);
  if (k >= trace.size()) throw std::invalid_argument("reconstruct: t beyond the computed trace");
  check_horizon(initial, t, horizon_margin);

  if (k == 0) {
    FieldState out = radius ? initial.cropped(*radius) : initial;
    return out;
  }

  const double m = model.mass();
  FieldState field = FreeEvolution(initial, m).field(t, radius, panel_width);
  const Grid& g = field.grid;
  const double tk = static_cast<double>(k) * trace.dt;
  field.time = tk;
  field.fronts = {-tk, tk};

  const detail::GaussLegendre& gl = detail::gauss_legendre();
  const SourceInterpolant source{trace.f, trace.dt, k};
  const cdouble f0 = trace.f[0];

  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = std::abs(g.x(i));
    if (x >= tk) continue;
    cdouble duhamel = 0.0;
    cdouble duhamel_dt = 0.5 * bessel_j0(m * std::sqrt((tk - x) * (tk + x))) * f0;

    // tau = t - s runs over [|x|, t]; kernel J0(m sqrt(tau^2 - x^2)) / 2.
    const double span = tk - x;
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(span / panel_width)));
    const double width = span / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double a = x + width * static_cast<double>(p);
      for (int q = 0; q < detail::GaussLegendre::kPoints; ++q) {
        const double tau = a + 0.5 * width * (gl.node[q] + 1.0);
        const double w = 0.25 * width * gl.weight[q] * bessel_j0(m * std::sqrt(std::max(0.0, (tau - x) * (tau + x))));
        const auto [fv, fd] = source(tk - tau);
        duhamel += w * fv;
        duhamel_dt += w * fd;
      }
    }

    if (i == g.center()) {
      // Same trapezoid sum as the trace equation.
      cdouble sum = 0.5 * bessel_j0(m * tk) * trace.f[0] + 0.5 * trace.f[k];
      for (std::size_t j = 1; j < k; ++j) {
        sum += bessel_j0(m * static_cast<double>(k - j) * trace.dt) * trace.f[j];
      }
      duhamel = 0.5 * trace.dt * sum;
    }
    field.psi[i] += duhamel;
    field.pi[i] += duhamel_dt;
  }
  return field;
}

std::pair<SolveReport, std::vector<FieldState>> solve_full(const OscillatorModel& model, const FieldState& initial,
                                                           double T, double dt,
                                                           const std::vector<double>& snapshot_times,
                                                           const SolveOptions& options) {
  SolveOptions trace_options = options;
  trace_options.monitor_times.clear();
  SolveReport report = solve_trace(model, initial, T, dt, trace_options);
  std::vector<FieldState> snapshots;
  if (report.status == SolveStatus::NonFinite) return {std::move(report), std::move(snapshots)};

  const double m = model.mass();
  const double e0 = energy(model, initial);
  const double q0 = charge(initial);
  const double e_scale = 0.5 * inner_e(initial, initial, m).real() + std::abs(model.potential(report.trace.z[0]));
  const double q_scale = std::sqrt(l2_norm_sq(initial.psi, initial.grid) * l2_norm_sq(initial.pi, initial.grid));
  report.energy_samples.push_back({0.0, e0});
  report.charge_samples.push_back({0.0, q0});

  for (double t : snapshot_times) {
    if (t > report.trace.duration() + 1e-12) break;
    FieldState s = reconstruct_field(model, initial, report.trace, t, std::nullopt, options.panel_width,
                                     options.horizon_margin);
    const double e = energy(model, s);
    const double q = charge(s);
    if (t > 0.0) {
      report.energy_samples.push_back({t, e});
      report.charge_samples.push_back({t, q});
      report.max_energy_drift = std::max(report.max_energy_drift, relative_drift(e, e0, e_scale));
      report.max_charge_drift = std::max(report.max_charge_drift, relative_drift(q, q0, q_scale));
    }
    snapshots.push_back(std::move(s));
  }
  if (report.status == SolveStatus::Completed && report.max_energy_drift > options.drift_tolerance) {
    report.status = SolveStatus::EnergyDriftExceeded;
    std::ostringstream msg;
    msg << "relative energy drift " << report.max_energy_drift << " exceeds " << options.drift_tolerance;
    report.diagnostic = msg.str();
  }
  return {std::move(report), std::move(snapshots)};
}

}  // namespace pointkg
