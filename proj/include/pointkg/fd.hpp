#pragma once

#include "pointkg/kernel.hpp"
#include "pointkg/model.hpp"
#include "pointkg/volterra.hpp"

namespace pointkg {

/// Grid approximation of delta(x): 1/h at the center node, or the three-node
/// hat (1/4, 1/2, 1/4)/h. The oscillator sees the same weighted sample of psi.
enum class DeltaStencil { Point, Smoothed };

struct FdOptions {
  DeltaStencil delta = DeltaStencil::Point;
  double horizon_margin = 1.0;
};

/// Largest step accepted by the leapfrog solver on this grid.
double fd_max_step(const Grid& grid);

/// One leapfrog step in kick-drift-kick form:
///
///   psi^{n+1} = psi^n + dt pi^n + dt^2/2 a(psi^n)
///   pi^{n+1}  = pi^n + dt/2 (a(psi^n) + a(psi^{n+1}))
///
/// with a(psi) = D2 psi - m^2 psi + delta_h F(psi(0)). Eliminating pi gives the
/// three-level recursion psi^{n+1} = 2 psi^n - psi^{n-1} + dt^2 a(psi^n), the
/// first step being the Taylor start from pi_0. Values beyond the grid are zero.
/// Throws std::invalid_argument when dt > 0.9 h.
FieldState fd_step(const OscillatorModel& model, const FieldState& state, double dt,
                   DeltaStencil delta = DeltaStencil::Point);

/// The oscillator's sample of psi: psi(0), or its hat-weighted average.
cdouble fd_sample(const FieldState& state, DeltaStencil delta = DeltaStencil::Point);

/// Discrete energy conserved (up to a bounded O(dt^2) oscillation) by the scheme:
/// (h/2) sum (|pi|^2 + |D+ psi|^2 + m^2 |psi|^2) + U(sample).
double fd_energy(const OscillatorModel& model, const FieldState& state,
                 DeltaStencil delta = DeltaStencil::Point);

/// Runs the leapfrog solver to T and returns the sampled trace; `f` holds
/// F(sample). Checks the horizon and the step restriction first.
TraceSeries fd_trace(const OscillatorModel& model, const FieldState& initial, double T, double dt,
                     const FdOptions& options = {});

}  // namespace pointkg
