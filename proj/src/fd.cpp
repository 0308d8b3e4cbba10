#include "pointkg/fd.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace pointkg {

namespace {

constexpr std::array<double, 3> kHat{0.25, 0.5, 0.25};

void acceleration(const OscillatorModel& model, const std::vector<cdouble>& psi, const Grid& grid,
                  DeltaStencil delta, std::vector<cdouble>& out) {
  const std::size_t n = psi.size();
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const double m2 = model.mass() * model.mass();
  for (std::size_t i = 0; i < n; ++i) {
    const cdouble left = i > 0 ? psi[i - 1] : cdouble{};
    const cdouble right = i + 1 < n ? psi[i + 1] : cdouble{};
    out[i] = (left - 2.0 * psi[i] + right) * inv_h2 - m2 * psi[i];
  }
  const std::size_t c = grid.center();
  if (delta == DeltaStencil::Point) {
    out[c] += model.force(psi[c]) / h;
    return;
  }
  const cdouble sample = kHat[0] * psi[c - 1] + kHat[1] * psi[c] + kHat[2] * psi[c + 1];
  const cdouble f = model.force(sample);
  for (std::size_t j = 0; j < 3; ++j) out[c - 1 + j] += kHat[j] * f / h;
}

void check_step(const Grid& grid, double dt) {
  if (!(dt > 0.0) || dt > fd_max_step(grid) * (1.0 + 1e-12)) {
    throw std::invalid_argument("fd: dt must lie in (0, 0.9 h]");
  }
}

struct Leapfrog {
  const OscillatorModel& model;
  DeltaStencil delta;
  double dt;
  std::vector<cdouble> acc;
  std::vector<cdouble> acc_next;

  Leapfrog(const OscillatorModel& mdl, const FieldState& state, DeltaStencil d, double step)
      : model(mdl), delta(d), dt(step), acc(state.grid.size()), acc_next(state.grid.size()) {
    acceleration(model, state.psi, state.grid, delta, acc);
  }

  void advance(FieldState& s) {
    const double half = 0.5 * dt;
    for (std::size_t i = 0; i < s.psi.size(); ++i) s.psi[i] += dt * (s.pi[i] + half * acc[i]);
    acceleration(model, s.psi, s.grid, delta, acc_next);
    for (std::size_t i = 0; i < s.pi.size(); ++i) s.pi[i] += half * (acc[i] + acc_next[i]);
    acc.swap(acc_next);
    s.time += dt;
  }
};

}  // namespace

double fd_max_step(const Grid& grid) { return 0.9 * grid.spacing(); }

cdouble fd_sample(const FieldState& state, DeltaStencil delta) {
  const std::size_t c = state.grid.center();
  if (delta == DeltaStencil::Point) return state.psi[c];
  return kHat[0] * state.psi[c - 1] + kHat[1] * state.psi[c] + kHat[2] * state.psi[c + 1];
}

FieldState fd_step(const OscillatorModel& model, const FieldState& state, double dt, DeltaStencil delta) {
  check_step(state.grid, dt);
  FieldState next = state;
  next.fronts.clear();
  Leapfrog(model, state, delta, dt).advance(next);
  return next;
}

double fd_energy(const OscillatorModel& model, const FieldState& state, DeltaStencil delta) {
  const double h = state.grid.spacing();
  const double m2 = model.mass() * model.mass();
  const std::size_t n = state.psi.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += std::norm(state.pi[i]) + m2 * std::norm(state.psi[i]);
    const cdouble right = i + 1 < n ? state.psi[i + 1] : cdouble{};
    acc += std::norm(right - state.psi[i]) / (h * h);
  }
  // The left boundary cell (zero ghost value to psi_0).
  acc += std::norm(state.psi[0]) / (h * h);
  return 0.5 * h * acc + model.potential(fd_sample(state, delta));
}

TraceSeries fd_trace(const OscillatorModel& model, const FieldState& initial, double T, double dt,
                     const FdOptions& options) {
  check_step(initial.grid, dt);
  const double steps_d = T / dt;
  const double steps_r = std::round(steps_d);
  if (!(T >= 0.0) || std::abs(steps_d - steps_r) > 1e-9 * std::max(1.0, steps_d)) {
    throw std::invalid_argument("fd: T must be a multiple of dt");
  }
  check_horizon(initial, T, options.horizon_margin);
  const auto steps = static_cast<std::size_t>(steps_r);

  TraceSeries trace;
  trace.dt = dt;
  trace.z.reserve(steps + 1);
  trace.f.reserve(steps + 1);
  FieldState s = initial;
  s.fronts.clear();
  Leapfrog stepper(model, s, options.delta, dt);
  auto record = [&] {
    const cdouble z = fd_sample(s, options.delta);
    trace.z.push_back(z);
    trace.f.push_back(model.force(z));
  };
  record();
  for (std::size_t k = 0; k < steps; ++k) {
    stepper.advance(s);
    record();
  }
  return trace;
}

}  // namespace pointkg
