#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace pointkg::cli {

enum ExitCode : int { kOk = 0, kRunFailure = 1, kConfigFailure = 2 };

struct GlobalOptions {
  std::optional<std::string> config;
  std::string out = "pointkg-out";
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  /// "dotted.path=value" assignments applied on top of the config file.
  std::vector<std::string> overrides;
};

/// Config document from --config (or empty) with overrides and --seed applied.
nlohmann::json config_document(const GlobalOptions& g);
RunConfig resolve_config(const GlobalOptions& g);

/// Everything a single trajectory needs.
struct Prepared {
  RunConfig config;
  OscillatorModel model;
  Grid grid;
  FieldState initial;
};
Prepared prepare(RunConfig config);

/// Attraction diagnostics of one trajectory (shared by attract and sweep).
struct AttractResult {
  SolveStatus status = SolveStatus::Completed;
  std::string diagnostic;
  OmegaLimitReport final_report;
  std::vector<TimeWindow> windows;
  std::vector<double> window_gap_fractions;
  std::vector<double> distance_times;
  std::vector<ManifoldDistance> distances;
  double energy0 = 0.0;
  double apriori_bound_sq = 0.0;
  std::size_t apriori_violations = 0;
  TraceSeries trace;
};
AttractResult run_attract(const Prepared& p);
nlohmann::json to_json(const AttractResult& r);
nlohmann::json to_json(const OmegaLimitReport& r);
nlohmann::json to_json(const std::optional<SolitaryWave>& w);

int cmd_simulate(const GlobalOptions& g);

struct SolitaryArgs {
  std::optional<double> amplitude;
  std::optional<double> omega;
};
int cmd_solitary(const GlobalOptions& g, const SolitaryArgs& args);

struct SpectrumArgs {
  std::string trace_path;
  std::optional<double> t_center;
  std::optional<double> t_width;
  std::string window = "hann";
};
int cmd_spectrum(const GlobalOptions& g, const SpectrumArgs& args);

int cmd_attract(const GlobalOptions& g);
int cmd_sweep(const GlobalOptions& g);
int cmd_compare(const GlobalOptions& g);

/// Runs `body`, mapping ConfigError to exit code 2 and other failures to 1,
/// with a JSON error document on stderr.
int guarded(const std::string& command, const std::function<int()>& body);

}  // namespace pointkg::cli
