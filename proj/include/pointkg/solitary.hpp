#pragma once

#include <optional>
#include <vector>

#include "pointkg/kernel.hpp"
#include "pointkg/model.hpp"

namespace pointkg {

enum class Branch { Plus, Minus };

/// One point C e^{i theta} e^{-kappa |x|} e^{-i omega t} of the solitary manifold.
struct SolitaryWave {
  double amplitude = 0.0;  // C >= 0
  double phase = 0.0;      // theta in [0, 2 pi)
  double kappa = 0.0;
  double omega = 0.0;
  Branch branch = Branch::Plus;
};

/// Waves of amplitude C: kappa = alpha(C^2)/2 must lie in (0, m];
/// omega = +-sqrt(m^2 - kappa^2) (a single wave when omega = 0).
std::vector<SolitaryWave> waves_from_amplitude(const OscillatorModel& model, double amplitude);

struct WavesAtOmega {
  std::vector<SolitaryWave> waves;
  /// Linear models at omega = +-omega_a: every C > 0 is a solitary wave with
  /// kappa = a/2, so no finite list is returned.
  bool any_amplitude = false;
  double kappa = 0.0;
};

/// All C > 0 with alpha(C^2) = 2 sqrt(m^2 - omega^2), ascending and deduplicated.
WavesAtOmega waves_at_omega(const OscillatorModel& model, double omega);

/// omega_a = sqrt(m^2 - a^2/4) of a linear model with 0 < a < 2m; nullopt otherwise.
std::optional<double> linear_bound_frequency(const OscillatorModel& model);

/// psi = C e^{i theta} e^{-kappa |x|} e^{-i omega t}, pi = -i omega psi.
FieldState sample_profile(const SolitaryWave& wave, const Grid& grid, double t = 0.0);

struct ManifoldDistance {
  double rho = 0.0;
  /// Nearest wave; nullopt when the zero state is nearest.
  std::optional<SolitaryWave> best;
  /// Linear models: least-squares coefficients on the +omega_a and -omega_a
  /// profiles (psi = (c_plus + c_minus) e^{-a|x|/2}).
  cdouble c_plus = 0.0;
  cdouble c_minus = 0.0;
};

/// Distance in the local seminorm ||.||_{E,R} from `state` to the solitary set.
///
/// Nonlinear models: 401-point omega scan over (-m, m) refined by golden-section
/// search, with the phase chosen analytically per candidate. Linear models:
/// least-squares projection onto the span of the two bound profiles.
ManifoldDistance distance_to_manifold(const OscillatorModel& model, const FieldState& state, double radius);

}  // namespace pointkg
