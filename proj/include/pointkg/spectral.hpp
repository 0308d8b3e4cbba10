#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pointkg/model.hpp"
#include "pointkg/solitary.hpp"
#include "pointkg/volterra.hpp"

namespace pointkg {

enum class WindowKind { Hann, Rect };
std::string to_string(WindowKind kind);

/// Time interval [t0, t1] of a trace.
struct TimeWindow {
  double t0 = 0.0;
  double t1 = 0.0;
};

/// Windowed transform zhat(omega) = dt sum_k w_k z_k e^{+i omega t_k} of a trace
/// segment, so that e^{-i w0 t} peaks at omega = +w0.
///
/// The segment is zero-padded four times; freqs ascend and are angular.
/// Parseval: sum |amps|^2 d_omega = 2 pi dt sum |w_k z_k|^2.
struct SpectrumEstimate {
  std::vector<double> freqs;
  std::vector<cdouble> amps;
  WindowKind window = WindowKind::Hann;
  double t_center = 0.0;
  double t_width = 0.0;
  std::size_t samples = 0;  // trace samples inside the window

  /// Spacing of the padded frequency axis.
  double d_omega() const;
  /// Resolution of the unpadded segment, 2 pi / t_width: one "bin".
  double bin() const;
  /// sum |amps|^2 d_omega.
  double total_mass() const;
};

/// Samples with t_k in [t_center - t_width/2, t_center + t_width/2].
/// Throws std::invalid_argument when the window leaves the trace or holds
/// fewer than two samples.
SpectrumEstimate windowed_spectrum(const TraceSeries& trace, double t_center, double t_width,
                                   WindowKind window = WindowKind::Hann);

/// Share of the spectral mass at |omega| <= m. A zero spectrum counts as 1.
double gap_mass_fraction(const SpectrumEstimate& spec, double m);

/// Share of the spectral mass within `bins` bins of any of `lines`.
double line_mass_fraction(const SpectrumEstimate& spec, const std::vector<double>& lines, double bins);

/// Peak of |amps| refined by a parabola through the three surrounding samples.
/// Equal peaks resolve to the smaller |omega|, then to the positive one.
double dominant_frequency(const SpectrumEstimate& spec);

/// (max - min) / max of |z_k| over t_k in [t0, t1]; 0 for a vanishing trace.
double modulus_variation(const TraceSeries& trace, double t0, double t1);

/// Last quarter of the trace, widened to at least 2^10 samples when possible.
TimeWindow late_window(const TraceSeries& trace);

struct OmegaLimitReport {
  double omega_plus = 0.0;
  double in_gap_fraction = 0.0;
  double modulus_variation = 0.0;
  /// Nearest solitary wave at the window center; nullopt means Zero.
  std::optional<SolitaryWave> matched_wave;
  double distance = 0.0;
  double radius = 0.0;
  TimeWindow window;
};

/// Field at time t, e.g. a bound call to reconstruct_field.
using Reconstructor = std::function<FieldState(double t)>;

/// Spectrum, gap fraction and dominant frequency of the window, modulus
/// variation over it, and the manifold distance (seminorm radius `radius`) of
/// the field reconstructed at the sample nearest the window center.
/// Throws std::invalid_argument for windows with fewer than 64 samples.
OmegaLimitReport omega_limit_report(const OscillatorModel& model, const TraceSeries& trace,
                                    const Reconstructor& reconstruct, TimeWindow window, double radius = 5.0,
                                    WindowKind kind = WindowKind::Hann);

/// Finitely supported integer sequence: values[j] sits at index offset + j.
struct IntegerSequence {
  std::vector<std::int64_t> values;
  std::int64_t offset = 0;
};

struct TitchmarshResult {
  std::pair<std::int64_t, std::int64_t> conv_support;
  std::pair<std::int64_t, std::int64_t> a_support;
  std::pair<std::int64_t, std::int64_t> g_support;
  bool endpoint_identity_holds = false;
};

/// Exact convolution of two integer sequences and the check that the support
/// endpoints add: inf(A*G) = inf A + inf G and sup(A*G) = sup A + sup G.
/// Throws std::invalid_argument for an identically zero factor and
/// std::overflow_error if a convolution entry leaves the int64 range.
std::vector<std::int64_t> exact_convolution(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& g);
TitchmarshResult titchmarsh_check(const IntegerSequence& a, const IntegerSequence& g);

}  // namespace pointkg
