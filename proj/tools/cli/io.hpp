#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pointkg/kernel.hpp"
#include "pointkg/spectral.hpp"
#include "pointkg/volterra.hpp"

namespace pointkg::cli {

/// Raised by the readers for malformed files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Trace file contents. energy and charge hold the rows where they were sampled.
struct TraceFile {
  TraceSeries trace;  // f is left empty
  std::vector<TimeSample> energy;
  std::vector<TimeSample> charge;
};

/// Columns t, re_z, im_z, abs_z, energy, charge; energy and charge are empty on
/// rows without a sample.
void write_trace_csv(const std::string& path, const TraceSeries& trace, const std::vector<TimeSample>& energy,
                     const std::vector<TimeSample>& charge);
TraceFile read_trace_csv(const std::string& path);

/// Columns x, re_psi, im_psi, re_pi, im_pi.
void write_snapshot_csv(const std::string& path, const FieldState& state);
FieldState read_snapshot_csv(const std::string& path);

/// Columns omega, re_amp, im_amp, abs_amp.
void write_spectrum_csv(const std::string& path, const SpectrumEstimate& spec);
SpectrumEstimate read_spectrum_csv(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::string& path);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace pointkg::cli
