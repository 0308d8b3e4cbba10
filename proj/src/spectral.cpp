#include "pointkg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"
#include "pointkg/observables.hpp"

namespace pointkg {

namespace {

constexpr std::size_t kPadding = 4;

std::pair<std::size_t, std::size_t> sample_range(const TraceSeries& trace, double t0, double t1) {
  if (trace.size() == 0 || !(trace.dt > 0.0)) throw std::invalid_argument("spectral: empty trace");
  // Edges may overhang the first or last sample by less than half a step.
  const double tol = 0.5 * trace.dt;
  if (t0 < -tol || t1 > trace.duration() + tol || !(t1 >= t0)) {
    throw std::invalid_argument("spectral: window outside the trace");
  }
  const auto first = static_cast<std::size_t>(std::max(0.0, std::ceil(t0 / trace.dt - 1e-9)));
  const auto last = std::min(trace.size() - 1, static_cast<std::size_t>(std::floor(t1 / trace.dt + 1e-9)));
  return {first, last};
}

double window_weight(WindowKind kind, std::size_t k, std::size_t n) {
  if (kind == WindowKind::Rect || n < 2) return 1.0;
  const double s = std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1));
  return s * s;
}

std::pair<std::int64_t, std::int64_t> support(const std::vector<std::int64_t>& v, std::int64_t offset) {
  const auto first = std::find_if(v.begin(), v.end(), [](std::int64_t x) { return x != 0; });
  if (first == v.end()) throw std::invalid_argument("titchmarsh: sequence is identically zero");
  const auto last = std::find_if(v.rbegin(), v.rend(), [](std::int64_t x) { return x != 0; });
  return {offset + (first - v.begin()), offset + static_cast<std::int64_t>(v.size()) - 1 - (last - v.rbegin())};
}

}  // namespace

std::string to_string(WindowKind kind) { return kind == WindowKind::Hann ? "hann" : "rect"; }

double SpectrumEstimate::d_omega() const { return freqs.size() < 2 ? 0.0 : freqs[1] - freqs[0]; }

double SpectrumEstimate::bin() const { return 2.0 * std::numbers::pi / t_width; }

double SpectrumEstimate::total_mass() const {
  double acc = 0.0;
  for (const auto& a : amps) acc += std::norm(a);
  return acc * d_omega();
}

SpectrumEstimate windowed_spectrum(const TraceSeries& trace, double t_center, double t_width, WindowKind window) {
  if (!(t_width > 0.0)) throw std::invalid_argument("spectral: window width must be positive");
  const auto [first, last] = sample_range(trace, t_center - 0.5 * t_width, t_center + 0.5 * t_width);
  if (last < first + 1) throw std::invalid_argument("spectral: window holds fewer than two samples");
  const std::size_t n = last - first + 1;
  const std::size_t padded = kPadding * n;
  const double dt = trace.dt;

  std::vector<cdouble> buf(padded);
  for (std::size_t k = 0; k < n; ++k) buf[k] = window_weight(window, k, n) * trace.z[first + k];
  detail::dft_inplace(buf, +1);

  // buf[j] = sum_k a_k e^{+2 pi i jk/N}; shift to absolute time t_first.
  SpectrumEstimate out;
  out.window = window;
  out.t_center = t_center;
  out.t_width = static_cast<double>(n) * dt;
  out.samples = n;
  out.freqs.resize(padded);
  out.amps.resize(padded);
  const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(padded) * dt);
  const double t_first = trace.time(first);
  const auto half = static_cast<std::ptrdiff_t>(padded / 2);
  for (std::size_t idx = 0; idx < padded; ++idx) {
    // Ascending order: j = idx - half, stored at buf[j mod N].
    const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(idx) - half;
    const auto src = static_cast<std::size_t>((j + static_cast<std::ptrdiff_t>(padded)) %
                                              static_cast<std::ptrdiff_t>(padded));
    const double omega = static_cast<double>(j) * d_omega;
    out.freqs[idx] = omega;
    out.amps[idx] = dt * buf[src] * std::polar(1.0, omega * t_first);
  }
  return out;
}

double gap_mass_fraction(const SpectrumEstimate& spec, double m) {
  double inside = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < spec.amps.size(); ++j) {
    const double p = std::norm(spec.amps[j]);
    total += p;
    if (std::abs(spec.freqs[j]) <= m) inside += p;
  }
  return total > 0.0 ? inside / total : 1.0;
}

double line_mass_fraction(const SpectrumEstimate& spec, const std::vector<double>& lines, double bins) {
  const double reach = bins * spec.bin();
  double inside = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < spec.amps.size(); ++j) {
    const double p = std::norm(spec.amps[j]);
    total += p;
    const bool near = std::any_of(lines.begin(), lines.end(),
                                  [&](double w) { return std::abs(spec.freqs[j] - w) <= reach; });
    if (near) inside += p;
  }
  return total > 0.0 ? inside / total : 1.0;
}

double dominant_frequency(const SpectrumEstimate& spec) {
  const std::size_t n = spec.amps.size();
  if (n == 0) throw std::invalid_argument("spectral: empty spectrum");
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double mag = std::abs(spec.amps[j]);
    const double tie = 1e-12 * std::max(mag, best_mag);
    if (mag > best_mag + tie) {
      best = j;
      best_mag = mag;
    } else if (std::abs(mag - best_mag) <= tie) {
      const double wj = spec.freqs[j];
      const double wb = spec.freqs[best];
      if (std::abs(wj) < std::abs(wb) - 1e-12 * spec.d_omega() ||
          (std::abs(std::abs(wj) - std::abs(wb)) <= 1e-12 * spec.d_omega() && wj > wb)) {
        best = j;
      }
    }
  }
  if (best == 0 || best + 1 == n || best_mag == 0.0) return spec.freqs[best];
  const double ym = std::abs(spec.amps[best - 1]);
  const double y0 = best_mag;
  const double yp = std::abs(spec.amps[best + 1]);
  const double denom = ym - 2.0 * y0 + yp;
  const double shift = denom < 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
  return spec.freqs[best] + std::clamp(shift, -0.5, 0.5) * spec.d_omega();
}

double modulus_variation(const TraceSeries& trace, double t0, double t1) {
  const auto [first, last] = sample_range(trace, t0, t1);
  double lo = INFINITY;
  double hi = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    const double a = std::abs(trace.z[k]);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  return hi > 0.0 ? (hi - lo) / hi : 0.0;
}

TimeWindow late_window(const TraceSeries& trace) {
  if (trace.size() < 2) throw std::invalid_argument("spectral: trace too short");
  const std::size_t last = trace.size() - 1;
  std::size_t count = std::max<std::size_t>(trace.size() / 4, std::size_t{1} << 10);
  count = std::min(count, trace.size());
  return {trace.time(last + 1 - count), trace.time(last)};
}

OmegaLimitReport omega_limit_report(const OscillatorModel& model, const TraceSeries& trace,
                                    const Reconstructor& reconstruct, TimeWindow window, double radius,
                                    WindowKind kind) {
  const auto [first, last] = sample_range(trace, window.t0, window.t1);
  if (last + 1 < first + 64) throw std::invalid_argument("omega_limit_report: window holds fewer than 64 samples");
  const double t0 = trace.time(first);
  const double t1 = trace.time(last);
  // Width covering exactly the samples first..last.
  const SpectrumEstimate spec = windowed_spectrum(trace, 0.5 * (t0 + t1), t1 - t0 + 0.5 * trace.dt, kind);

  OmegaLimitReport report;
  report.window = {t0, t1};
  report.omega_plus = dominant_frequency(spec);
  report.in_gap_fraction = gap_mass_fraction(spec, model.mass());
  report.modulus_variation = modulus_variation(trace, t0, t1);
  report.radius = radius;
  const double t_mid = trace.time((first + last) / 2);
  const ManifoldDistance d = distance_to_manifold(model, reconstruct(t_mid), radius);
  report.matched_wave = d.best;
  report.distance = d.rho;
  return report;
}

std::vector<std::int64_t> exact_convolution(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& g) {
  if (a.empty() || g.empty()) return {};
  std::vector<std::int64_t> out(a.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      std::int64_t prod = 0;
      if (__builtin_mul_overflow(a[i], g[j], &prod) || __builtin_add_overflow(out[i + j], prod, &out[i + j])) {
        throw std::overflow_error("titchmarsh: convolution overflows int64");
      }
    }
  }
  return out;
}

TitchmarshResult titchmarsh_check(const IntegerSequence& a, const IntegerSequence& g) {
  TitchmarshResult r;
  r.a_support = support(a.values, a.offset);
  r.g_support = support(g.values, g.offset);
  const auto conv = exact_convolution(a.values, g.values);
  r.conv_support = support(conv, a.offset + g.offset);
  r.endpoint_identity_holds = r.conv_support.first == r.a_support.first + r.g_support.first &&
                              r.conv_support.second == r.a_support.second + r.g_support.second;
  return r;
}

}  // namespace pointkg
