#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pointkg/bessel.hpp"

namespace pointkg {

using cdouble = std::complex<double>;

/// Uniform grid on [-L, L] with an odd node count so that x = 0 is a node.
class Grid {
 public:
  Grid(double half_extent, std::size_t n_points);

  double half_extent() const { return half_extent_; }
  std::size_t size() const { return n_; }
  double spacing() const { return h_; }
  std::size_t center() const { return (n_ - 1) / 2; }
  double x(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(center())) * h_;
  }
  /// Period of the discrete Fourier representation, n h.
  double period() const { return static_cast<double>(n_) * h_; }

  /// Centered sub-grid with the same spacing covering [-radius, radius].
  Grid window(double radius) const;

  /// Grid with exactly this spacing; the extent is rounded up to whole cells.
  static Grid with_spacing(double half_extent, double spacing);

  bool operator==(const Grid&) const = default;

 private:
  double half_extent_;
  std::size_t n_;
  double h_;
};

/// Sampled phase point Psi = [psi; pi] at a given time.
struct FieldState {
  Grid grid;
  std::vector<cdouble> psi;
  std::vector<cdouble> pi;
  double time = 0.0;
  /// Positions where psi' and pi are known to jump (light-cone fronts of a
  /// reconstructed field). Quadratures split the cells containing them.
  std::vector<double> fronts;

  explicit FieldState(Grid g, double t = 0.0)
      : grid(g), psi(g.size()), pi(g.size()), time(t) {}

  bool is_finite() const;
  FieldState rotated(double theta) const;
  /// Restriction to a centered window of the same spacing.
  FieldState cropped(double radius) const;
};

class HorizonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Radius beyond which |psi| and |pi| stay below `rel_tol` times their maximum.
double data_radius(const FieldState& state, double rel_tol = 1e-13);

/// Enforces L >= data_radius + t_max + margin; throws HorizonError otherwise.
void check_horizon(const FieldState& state, double t_max, double margin = 1.0);

/// Retarded Green function theta(t - |x|) J0(m sqrt(t^2 - x^2)) / 2.
double green_g(double x, double t, double m);

/// Free Klein-Gordon evolution by the discrete Fourier propagator.
FieldState free_evolve(const FieldState& state, double dt, double m);

/// Free-field trace psi_1(0, t_k) for the given times. Uniformly spaced times
/// use a rotation recurrence per Fourier mode, resynchronised periodically.
std::vector<cdouble> free_trace(const FieldState& initial, std::span<const double> times, double m);

/// Same as free_trace on the uniform grid t_k = k dt, k = 0..n_steps.
std::vector<cdouble> free_trace_uniform(const FieldState& initial, double dt, std::size_t n_steps, double m);

/// Free evolution of data that may carry a derivative jump at x = 0.
///
/// Sampled data with a kink at the origin loses spectral accuracy: the kink
/// splits into fronts travelling at unit speed, and the trigonometric
/// interpolant rings around them. The jumps of psi' and pi' at x = 0 are
/// therefore removed with multiples of e^{-b|x|}, whose free evolution is known
/// through the exact solution e^{-b|x|} e^{-+i w_b t} of the linear point
/// coupling F = 2b psi (w_b^2 = m^2 - b^2):
///
///   W0(t)[e^{-b|x|}; 0] = e^{-b|x|} cos(w_b t) - 2b int_0^t G(x, t-s) cos(w_b s) ds
///   W0(t)[0; e^{-b|x|}] = e^{-b|x|} sin(w_b t)/w_b - (2b/w_b) int_0^t G(x, t-s) sin(w_b s) ds
///
/// The C^2 remainder goes through the spectral propagator.
class FreeEvolution {
 public:
  FreeEvolution(const FieldState& initial, double m);

  const FieldState& initial() const { return initial_; }
  double mass() const { return m_; }
  /// Jumps psi'(0+) - psi'(0-) and pi'(0+) - pi'(0-) estimated from the samples.
  cdouble psi_jump() const { return psi_jump_; }
  cdouble pi_jump() const { return pi_jump_; }

  /// psi_1(0, k dt), k = 0..n_steps.
  std::vector<cdouble> trace_uniform(double dt, std::size_t n_steps) const;

  /// Free field at time t, optionally cropped to [-radius, radius].
  FieldState field(double t, std::optional<double> radius = std::nullopt, double panel_width = 0.25) const;

  /// Decay rate b of the kink profile and its frequency w_b.
  double kink_decay() const { return b_; }
  double kink_frequency() const { return wb_; }

 private:
  FieldState initial_;
  FieldState remainder_;
  double m_;
  double b_;
  double wb_;
  cdouble psi_jump_;
  cdouble pi_jump_;
  cdouble c_psi_;  // coefficient of e^{-b|x|} removed from psi
  cdouble c_pi_;   // and from pi
};

}  // namespace pointkg
