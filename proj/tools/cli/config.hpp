#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pointkg/fd.hpp"
#include "pointkg/kernel.hpp"
#include "pointkg/model.hpp"
#include "pointkg/solitary.hpp"
#include "pointkg/spectral.hpp"
#include "pointkg/volterra.hpp"

namespace pointkg::cli {

using nlohmann::json;

/// Every violated constraint of a configuration, one message each.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct ModelSpec {
  std::string kind = "polynomial";  // "polynomial" | "linear"
  double mass = 1.0;
  std::vector<double> coefficients{0.0, -1.0, 1.0};
  double a = 0.0;
};

struct GaussianSpec {
  cdouble amplitude{0.5, 0.0};
  double width = 1.0;
  double center = 0.0;
  double momentum = 0.0;   // psi_0 carries e^{i p x}
  double omega_bar = 0.0;  // pi_0 = -i omega_bar psi_0
};

/// Gaussian parameters drawn from the seed, uniformly in each [lo, hi].
struct RandomGaussianSpec {
  std::array<double, 2> amplitude{0.3, 0.7};
  std::array<double, 2> phase{0.0, 0.0};
  std::array<double, 2> width{0.7, 1.5};
  std::array<double, 2> center{-4.0, 4.0};
  std::array<double, 2> momentum{0.0, 0.0};
  std::array<double, 2> omega_bar{-1.0, 1.0};
};

struct SolitarySpec {
  double amplitude = 0.5;
  double theta = 0.0;
  Branch branch = Branch::Plus;
};

struct SolitaryPlusBumpSpec {
  SolitarySpec wave;
  GaussianSpec bump;
};

struct ZeroSpec {};

struct FileSpec {
  std::string path;
};

using InitialSpec = std::variant<ZeroSpec, GaussianSpec, RandomGaussianSpec, SolitarySpec, SolitaryPlusBumpSpec, FileSpec>;

struct SpectrumRequest {
  double t_center = 0.0;
  double t_width = 0.0;
  WindowKind window = WindowKind::Hann;
};

struct OutputSpec {
  bool trace = true;
  std::vector<double> snapshots;
  std::vector<SpectrumRequest> spectra;
  bool report = true;
};

struct AttractSpec {
  double radius = 5.0;
  /// Times at which the manifold distance is measured.
  std::vector<double> distance_times;
  /// Number of consecutive late windows checked for spectral collapse.
  std::size_t windows = 3;
};

struct SweepParameter {
  std::string path;  // dotted path into the config, e.g. "initial.amplitude"
  std::vector<json> values;
};

struct SweepSpec {
  std::vector<SweepParameter> parameters;
  std::vector<std::uint64_t> seeds;
};

struct CompareSpec {
  std::size_t levels = 3;
  DeltaStencil delta = DeltaStencil::Point;
  /// Discrepancy is taken over t <= horizon (defaults to T).
  std::optional<double> horizon;
};

struct RunConfig {
  ModelSpec model;
  std::optional<double> half_extent;  // absent: smallest extent passing the horizon rule
  std::optional<std::size_t> n_points;
  std::optional<double> spacing;
  double T = 10.0;
  double dt = 1e-3;
  InitialSpec initial = ZeroSpec{};
  std::uint64_t seed = 0;
  SolveOptions solver;
  OutputSpec outputs;
  AttractSpec attract;
  SweepSpec sweep;
  CompareSpec compare;
  /// The document as read (after overrides), echoed into reports.
  json source;
};

/// Parses and validates; throws ConfigError listing every violation.
RunConfig parse_config(const json& doc);
RunConfig load_config(const std::string& path);

/// Applies "a.b.c=value" (value parsed as JSON, else taken as a string).
void apply_override(json& doc, const std::string& assignment);
void set_path(json& doc, const std::string& dotted, const json& value);

OscillatorModel build_model(const ModelSpec& spec);

/// Radius outside which the initial data is below 1e-13 of its peak, from the
/// closed forms (file data: from the samples).
double initial_radius(const RunConfig& config, const OscillatorModel& model);

/// Grid honouring the horizon rule for a run of length T.
Grid build_grid(const RunConfig& config, const OscillatorModel& model);

/// Initial state on `grid`. Random Gaussians draw from (seed, stream 0).
FieldState build_initial(const RunConfig& config, const OscillatorModel& model, const Grid& grid);

/// The Gaussian a RandomGaussianSpec resolves to under `seed`.
GaussianSpec draw_gaussian(const RandomGaussianSpec& spec, std::uint64_t seed);

}  // namespace pointkg::cli
