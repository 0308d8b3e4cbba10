#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

using namespace pointkg::cli;

int main(int argc, char** argv) {
  CLI::App app{"Klein-Gordon field with a point nonlinear oscillator"};
  app.require_subcommand(1);
  // Global flags may also follow the subcommand.
  app.fallthrough();
  GlobalOptions g;
  std::string config;
  std::uint64_t seed = 0;
  app.add_option("--config", config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "seed for random initial data (overrides the config)");
  app.add_option("--workers", g.workers, "parallel trajectories for sweep")->check(CLI::PositiveNumber);
  app.add_option("--set", g.overrides, "override a config field, e.g. --set time.T=100")->take_all();

  // Flags mirroring common config fields.
  std::optional<double> T, dt, spacing, half_extent, mass, a;
  std::optional<std::string> coefficients;
  auto mirror = [&](CLI::App* sub) {
    sub->add_option("--T", T, "final time");
    sub->add_option("--dt", dt, "time step");
    sub->add_option("--spacing", spacing, "grid spacing");
    sub->add_option("--half-extent", half_extent, "grid half extent");
    sub->add_option("--mass", mass, "field mass m");
    sub->add_option("--coefficients", coefficients, "potential coefficients u_0,...,u_N (JSON array)");
    sub->add_option("--linear", a, "use the linear model F = a psi");
  };

  auto* simulate = app.add_subcommand("simulate", "solve, reconstruct snapshots, write trace and report");
  auto* solitary = app.add_subcommand("solitary", "list solitary waves for an amplitude or a frequency");
  auto* spectrum = app.add_subcommand("spectrum", "windowed spectrum of a trace file");
  auto* attract = app.add_subcommand("attract", "attraction diagnostics of one trajectory");
  auto* sweep = app.add_subcommand("sweep", "attraction diagnostics over a parameter grid");
  auto* compare = app.add_subcommand("compare", "volterra against the finite-difference oracle");
  for (auto* sub : {simulate, solitary, spectrum, attract, sweep, compare}) mirror(sub);

  SolitaryArgs sol;
  solitary->add_option("--C", sol.amplitude, "amplitude C > 0");
  solitary->add_option("--omega", sol.omega, "frequency omega");

  SpectrumArgs spec;
  spectrum->add_option("--trace", spec.trace_path, "trace CSV")->required();
  spectrum->add_option("--t-center", spec.t_center, "window center");
  spectrum->add_option("--t-width", spec.t_width, "window width");
  spectrum->add_option("--window", spec.window, "hann or rect")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  if (!config.empty()) g.config = config;
  if (*seed_opt) g.seed = seed;
  // Mirrored flags are applied after --set, so they win.
  std::vector<std::string> mirrored;
  auto add = [&](const std::string& key, const auto& v) {
    if (v) mirrored.push_back(key + "=" + nlohmann::json(*v).dump());
  };
  add("time.T", T);
  add("time.dt", dt);
  add("grid.spacing", spacing);
  add("grid.half_extent", half_extent);
  add("model.mass", mass);
  if (coefficients) mirrored.push_back("model.coefficients=" + *coefficients);
  if (a) {
    mirrored.push_back("model.kind=\"linear\"");
    mirrored.push_back("model.a=" + nlohmann::json(*a).dump());
  }
  g.overrides.insert(g.overrides.end(), mirrored.begin(), mirrored.end());

  if (*simulate) return guarded("simulate", [&] { return cmd_simulate(g); });
  if (*solitary) return guarded("solitary", [&] { return cmd_solitary(g, sol); });
  if (*spectrum) return guarded("spectrum", [&] { return cmd_spectrum(g, spec); });
  if (*attract) return guarded("attract", [&] { return cmd_attract(g); });
  if (*sweep) return guarded("sweep", [&] { return cmd_sweep(g); });
  if (*compare) return guarded("compare", [&] { return cmd_compare(g); });
  return kConfigFailure;
}
