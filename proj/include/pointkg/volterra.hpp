#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pointkg/kernel.hpp"
#include "pointkg/model.hpp"

namespace pointkg {

/// Trace z_k ~ psi(0, k dt) and source f_k = F(z_k) on a uniform time grid.
struct TraceSeries {
  double dt = 0.0;
  std::vector<cdouble> z;
  std::vector<cdouble> f;

  std::size_t size() const { return z.size(); }
  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
  double duration() const { return z.empty() ? 0.0 : time(z.size() - 1); }
};

enum class SolveStatus { Completed, EnergyDriftExceeded, NonFinite };

std::string to_string(SolveStatus status);

struct TimeSample {
  double t = 0.0;
  double value = 0.0;
};

struct SolveOptions {
  /// Relative energy/charge drift tolerated at monitor times.
  double drift_tolerance = 1e-5;
  /// Times at which the field is reconstructed to sample energy and charge.
  std::vector<double> monitor_times;
  /// Abort when |z| exceeds this multiple of the a priori sup bound on |psi(0,t)|.
  double magnitude_slack = 1.5;
  double horizon_margin = 1.0;
  /// Width of the Gauss-Legendre panels used for the off-center cone integrals.
  double panel_width = 0.25;
};

struct SolveReport {
  TraceSeries trace;
  std::vector<TimeSample> energy_samples;
  std::vector<TimeSample> charge_samples;
  SolveStatus status = SolveStatus::Completed;
  std::string diagnostic;
  double max_energy_drift = 0.0;
  double max_charge_drift = 0.0;
};

/// Solves z(t) = h(t) + (1/2) int_0^t J0(m(t-s)) F(z(s)) ds, h the free trace,
/// by trapezoid product integration. The implicit endpoint term is resolved by
/// fixed-point iteration with a damped Newton fallback.
SolveReport solve_trace(const OscillatorModel& model, const FieldState& initial, double T, double dt,
                        const SolveOptions& options = {});

/// Full field at time t (a multiple of trace.dt) from the free part plus the
/// Duhamel cone integral int_0^{t-|x|} G(x, t-s) f(s) ds.
///
/// The center node uses the same trapezoid sum as the trace, so psi(0,t)
/// reproduces trace.z. Other nodes integrate the cone with Gauss-Legendre panels
/// on a local quintic interpolant of f. pi is the exact time derivative of the
/// cone integral, G(x,t) f(0) + int G(x, t-s) f'(s) ds.
///
/// With `radius`, only the centered window [-radius, radius] is returned.
FieldState reconstruct_field(const OscillatorModel& model, const FieldState& initial, const TraceSeries& trace,
                             double t, std::optional<double> radius = std::nullopt,
                             double panel_width = 0.25, double horizon_margin = 1.0);

/// solve_trace followed by reconstruction at each snapshot time; energy and
/// charge are sampled at t = 0 and at every snapshot.
std::pair<SolveReport, std::vector<FieldState>> solve_full(const OscillatorModel& model, const FieldState& initial,
                                                           double T, double dt,
                                                           const std::vector<double>& snapshot_times,
                                                           const SolveOptions& options = {});

/// Relative drift |q(t) - q(0)| / |q(0)|, falling back to `scale` when q(0) is
/// negligible against it.
double relative_drift(double value, double reference, double scale);

}  // namespace pointkg
