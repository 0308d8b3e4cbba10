#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <thread>

#include "io.hpp"
#include "pointkg/observables.hpp"

namespace pointkg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string out_path(const GlobalOptions& g, const std::string& name) {
  fs::create_directories(g.out);
  return (fs::path(g.out) / name).string();
}

json model_json(const OscillatorModel& m) {
  json j{{"kind", to_string(m.kind())}, {"mass", m.mass()}};
  if (m.kind() == ModelKind::Linear) {
    j["a"] = m.linear_coupling();
  } else {
    j["coefficients"] = m.coefficients();
  }
  return j;
}

json grid_json(const Grid& g) {
  return {{"half_extent", g.half_extent()}, {"n_points", g.size()}, {"spacing", g.spacing()}};
}

json samples_json(const std::vector<TimeSample>& s) {
  json arr = json::array();
  for (const auto& x : s) arr.push_back({{"t", x.t}, {"value", x.value}});
  return arr;
}

std::string branch_name(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }

json wave_json(const SolitaryWave& w) {
  return {{"C", w.amplitude}, {"theta", w.phase}, {"kappa", w.kappa}, {"omega", w.omega},
          {"branch", branch_name(w.branch)}};
}

std::vector<double> default_times(double T, double dt, std::size_t count) {
  std::vector<double> out;
  for (std::size_t j = 1; j <= count; ++j) {
    const double t = std::round(T * static_cast<double>(j) / static_cast<double>(count) / dt) * dt;
    if (out.empty() || t > out.back()) out.push_back(t);
  }
  return out;
}

std::string time_tag(double t) { return format_double(t); }

struct Bound {
  std::optional<BoundBelow> below;
  double norm_sq = INFINITY;
};

Bound apriori(const OscillatorModel& model, double energy0) {
  Bound b;
  b.below = check_bound_below(model);
  if (b.below) b.norm_sq = apriori_norm_bound_sq(model, *b.below, energy0);
  return b;
}

}  // namespace

json to_json(const std::optional<SolitaryWave>& w) {
  if (!w) return json{{"kind", "zero"}};
  json j = wave_json(*w);
  j["kind"] = "solitary";
  return j;
}

json to_json(const OmegaLimitReport& r) {
  return {{"omega_plus", r.omega_plus},
          {"in_gap_fraction", r.in_gap_fraction},
          {"modulus_variation", r.modulus_variation},
          {"matched_wave", to_json(r.matched_wave)},
          {"distance", r.distance},
          {"radius", r.radius},
          {"window", {r.window.t0, r.window.t1}}};
}

json config_document(const GlobalOptions& g) {
  json doc = json::object();
  if (g.config) {
    std::ifstream in(*g.config);
    if (!in) throw ConfigError({"cannot open config file " + *g.config});
    doc = json::parse(in, nullptr, false, true);
    if (doc.is_discarded()) throw ConfigError({"config file " + *g.config + " is not valid JSON"});
  }
  for (const auto& o : g.overrides) apply_override(doc, o);
  if (g.seed) doc["seed"] = *g.seed;
  return doc;
}

RunConfig resolve_config(const GlobalOptions& g) { return parse_config(config_document(g)); }

Prepared prepare(RunConfig config) {
  OscillatorModel model = build_model(config.model);
  Grid grid = build_grid(config, model);
  FieldState initial = build_initial(config, model, grid);
  return {std::move(config), std::move(model), grid, std::move(initial)};
}

int guarded(const std::string& command, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << json{{"command", command}, {"status", "config_error"}, {"problems", e.problems()}}.dump() << '\n';
    return kConfigFailure;
  } catch (const FormatError& e) {
    std::cerr << json{{"command", command}, {"status", "config_error"}, {"problems", {e.what()}}}.dump() << '\n';
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << json{{"command", command}, {"status", "run_failure"}, {"message", e.what()}}.dump() << '\n';
    return kRunFailure;
  }
}

int cmd_simulate(const GlobalOptions& g) {
  const Prepared p = prepare(resolve_config(g));
  const RunConfig& c = p.config;
  std::vector<double> monitor = c.outputs.snapshots;
  if (monitor.empty()) monitor = default_times(c.T, c.dt, 5);
  std::sort(monitor.begin(), monitor.end());
  monitor.erase(std::unique(monitor.begin(), monitor.end()), monitor.end());

  auto [report, states] = solve_full(p.model, p.initial, c.T, c.dt, monitor, c.solver);
  const Bound bound = apriori(p.model, energy(p.model, p.initial));

  json snapshots = json::array();
  std::size_t violations = 0;
  double max_norm_sq = 0.0;
  for (const FieldState& s : states) {
    const double n2 = std::pow(norm_e(s, p.model.mass()), 2);
    max_norm_sq = std::max(max_norm_sq, n2);
    if (n2 > bound.norm_sq) ++violations;
    json entry{{"t", s.time}, {"norm_e_sq", n2}, {"energy", energy(p.model, s)}, {"charge", charge(s)}};
    const bool requested = std::any_of(c.outputs.snapshots.begin(), c.outputs.snapshots.end(),
                                       [&](double t) { return std::abs(t - s.time) < 1e-9 * std::max(1.0, t); });
    if (requested) {
      const std::string name = "snapshot_t" + time_tag(s.time) + ".csv";
      write_snapshot_csv(out_path(g, name), s);
      entry["file"] = name;
    }
    snapshots.push_back(entry);
  }

  if (c.outputs.trace) {
    write_trace_csv(out_path(g, "trace.csv"), report.trace, report.energy_samples, report.charge_samples);
  }

  json spectra = json::array();
  for (std::size_t k = 0; k < c.outputs.spectra.size(); ++k) {
    const auto& rq = c.outputs.spectra[k];
    if (rq.t_center + 0.5 * rq.t_width > report.trace.duration() + 1e-9) continue;
    const SpectrumEstimate spec = windowed_spectrum(report.trace, rq.t_center, rq.t_width, rq.window);
    const std::string name = "spectrum_" + std::to_string(k) + ".csv";
    write_spectrum_csv(out_path(g, name), spec);
    spectra.push_back({{"file", name},
                       {"t_center", rq.t_center},
                       {"t_width", spec.t_width},
                       {"window", to_string(rq.window)},
                       {"dominant_frequency", dominant_frequency(spec)},
                       {"gap_mass_fraction", gap_mass_fraction(spec, p.model.mass())},
                       {"bin", spec.bin()}});
  }

  if (c.outputs.report) {
    json doc{{"command", "simulate"},
             {"status", to_string(report.status)},
             {"diagnostic", report.diagnostic},
             {"model", model_json(p.model)},
             {"grid", grid_json(p.grid)},
             {"time", {{"T", c.T}, {"dt", c.dt}, {"steps", report.trace.size()}}},
             {"seed", c.seed},
             {"energy_samples", samples_json(report.energy_samples)},
             {"charge_samples", samples_json(report.charge_samples)},
             {"max_energy_drift", report.max_energy_drift},
             {"max_charge_drift", report.max_charge_drift},
             {"snapshots", snapshots},
             {"spectra", spectra},
             {"config", c.source}};
    json ap{{"violations", violations}, {"max_norm_e_sq", max_norm_sq}};
    if (bound.below) {
      ap["A"] = bound.below->A;
      ap["B"] = bound.below->B;
      ap["bound_norm_e_sq"] = bound.norm_sq;
    } else {
      ap["bound_norm_e_sq"] = nullptr;
    }
    doc["apriori"] = ap;
    write_json(out_path(g, "report.json"), doc);
  }
  return report.status == SolveStatus::Completed ? kOk : kRunFailure;
}

int cmd_solitary(const GlobalOptions& g, const SolitaryArgs& args) {
  if (args.amplitude.has_value() == args.omega.has_value()) {
    throw ConfigError({"solitary needs exactly one of --C or --omega"});
  }
  const RunConfig c = resolve_config(g);
  const OscillatorModel model = build_model(c.model);
  std::vector<SolitaryWave> waves;
  bool any = false;
  double kappa = 0.0;
  if (args.amplitude) {
    if (!(*args.amplitude > 0.0)) throw ConfigError({"--C must be positive"});
    waves = waves_from_amplitude(model, *args.amplitude);
  } else {
    if (model.kind() == ModelKind::PolynomialNonlinear && !(std::abs(*args.omega) < model.mass())) {
      throw ConfigError({"--omega must satisfy |omega| < m for nonlinear models"});
    }
    const WavesAtOmega w = waves_at_omega(model, *args.omega);
    waves = w.waves;
    any = w.any_amplitude;
    kappa = w.kappa;
  }

  std::string table = "C,kappa,omega,branch\n";
  json rows = json::array();
  for (const auto& w : waves) {
    table += format_double(w.amplitude) + "," + format_double(w.kappa) + "," + format_double(w.omega) + "," +
             branch_name(w.branch) + "\n";
    rows.push_back(wave_json(w));
  }
  std::cout << table;
  if (any) std::cout << "# every C > 0 is admissible at this omega (kappa = " << format_double(kappa) << ")\n";

  if (!g.out.empty()) {
    std::ofstream(out_path(g, "solitary.csv"), std::ios::binary) << table;
    write_json(out_path(g, "solitary.json"), json{{"command", "solitary"},
                                                  {"model", model_json(model)},
                                                  {"waves", rows},
                                                  {"any_amplitude", any},
                                                  {"kappa", any ? json(kappa) : json(nullptr)}});
  }
  return kOk;
}

int cmd_spectrum(const GlobalOptions& g, const SpectrumArgs& args) {
  if (args.trace_path.empty()) throw ConfigError({"spectrum needs --trace"});
  WindowKind kind = WindowKind::Hann;
  if (args.window == "rect") {
    kind = WindowKind::Rect;
  } else if (args.window != "hann") {
    throw ConfigError({"--window must be hann or rect"});
  }
  const RunConfig c = resolve_config(g);
  const OscillatorModel model = build_model(c.model);
  const TraceFile file = read_trace_csv(args.trace_path);
  const TraceSeries& tr = file.trace;

  double t_center = 0.0;
  double t_width = 0.0;
  if (args.t_center || args.t_width) {
    t_width = args.t_width.value_or(tr.duration());
    t_center = args.t_center.value_or(tr.duration() - 0.5 * t_width);
  } else {
    const TimeWindow w = late_window(tr);
    t_center = 0.5 * (w.t0 + w.t1);
    t_width = w.t1 - w.t0 + 0.5 * tr.dt;
  }
  const SpectrumEstimate spec = windowed_spectrum(tr, t_center, t_width, kind);
  write_spectrum_csv(out_path(g, "spectrum.csv"), spec);
  write_json(out_path(g, "spectrum.json"), json{{"command", "spectrum"},
                                                {"trace", args.trace_path},
                                                {"t_center", t_center},
                                                {"t_width", spec.t_width},
                                                {"samples", spec.samples},
                                                {"window", to_string(kind)},
                                                {"d_omega", spec.d_omega()},
                                                {"bin", spec.bin()},
                                                {"mass", model.mass()},
                                                {"dominant_frequency", dominant_frequency(spec)},
                                                {"gap_mass_fraction", gap_mass_fraction(spec, model.mass())},
                                                {"total_mass", spec.total_mass()}});
  return kOk;
}

AttractResult run_attract(const Prepared& p) {
  const RunConfig& c = p.config;
  AttractResult r;
  SolveOptions opt = c.solver;
  opt.monitor_times.clear();
  SolveReport rep = solve_trace(p.model, p.initial, c.T, c.dt, opt);
  r.status = rep.status;
  r.diagnostic = rep.diagnostic;
  r.trace = std::move(rep.trace);
  r.energy0 = energy(p.model, p.initial);
  const Bound bound = apriori(p.model, r.energy0);
  r.apriori_bound_sq = bound.norm_sq;
  if (r.status != SolveStatus::Completed) return r;

  const double radius = c.attract.radius;
  Reconstructor recon = [&](double t) {
    return reconstruct_field(p.model, p.initial, r.trace, t, radius, c.solver.panel_width, c.solver.horizon_margin);
  };

  r.distance_times = c.attract.distance_times;
  if (r.distance_times.empty()) r.distance_times = default_times(c.T, c.dt, 20);
  for (double t : r.distance_times) {
    const FieldState s = recon(t);
    // The local seminorm is dominated by the global norm, so it must obey the bound too.
    if (std::pow(norm_e(s, p.model.mass()), 2) > r.apriori_bound_sq) ++r.apriori_violations;
    r.distances.push_back(distance_to_manifold(p.model, s, radius));
  }

  const TimeWindow late = late_window(r.trace);
  const double width = late.t1 - late.t0;
  for (std::size_t j = c.attract.windows; j-- > 0;) {
    const TimeWindow w{late.t0 - static_cast<double>(j) * width, late.t1 - static_cast<double>(j) * width};
    if (w.t0 < -1e-9) continue;
    r.windows.push_back(w);
    const SpectrumEstimate spec =
        windowed_spectrum(r.trace, 0.5 * (w.t0 + w.t1), w.t1 - w.t0 + 0.5 * c.dt, WindowKind::Hann);
    r.window_gap_fractions.push_back(gap_mass_fraction(spec, p.model.mass()));
  }
  r.final_report = omega_limit_report(p.model, r.trace, recon, late, radius);
  return r;
}

json to_json(const AttractResult& r) {
  json windows = json::array();
  for (std::size_t k = 0; k < r.windows.size(); ++k) {
    windows.push_back({{"t0", r.windows[k].t0}, {"t1", r.windows[k].t1}, {"in_gap_fraction", r.window_gap_fractions[k]}});
  }
  json distances = json::array();
  for (std::size_t k = 0; k < r.distances.size(); ++k) {
    distances.push_back({{"t", r.distance_times[k]}, {"rho", r.distances[k].rho}, {"best", to_json(r.distances[k].best)}});
  }
  json doc{{"status", to_string(r.status)},
           {"diagnostic", r.diagnostic},
           {"energy0", r.energy0},
           {"apriori_bound_norm_e_sq", std::isfinite(r.apriori_bound_sq) ? json(r.apriori_bound_sq) : json(nullptr)},
           {"apriori_violations", r.apriori_violations},
           {"windows", windows},
           {"distances", distances}};
  if (r.status == SolveStatus::Completed) doc["omega_limit"] = to_json(r.final_report);
  return doc;
}

int cmd_attract(const GlobalOptions& g) {
  const Prepared p = prepare(resolve_config(g));
  const AttractResult r = run_attract(p);
  json doc = to_json(r);
  doc["command"] = "attract";
  doc["model"] = model_json(p.model);
  doc["grid"] = grid_json(p.grid);
  doc["seed"] = p.config.seed;
  doc["config"] = p.config.source;
  write_json(out_path(g, "attract.json"), doc);

  std::string csv = "t,rho,C,omega,theta\n";
  for (std::size_t k = 0; k < r.distances.size(); ++k) {
    const auto& d = r.distances[k];
    csv += format_double(r.distance_times[k]) + "," + format_double(d.rho) + "," +
           format_double(d.best ? d.best->amplitude : 0.0) + "," + format_double(d.best ? d.best->omega : 0.0) + "," +
           format_double(d.best ? d.best->phase : 0.0) + "\n";
  }
  std::ofstream(out_path(g, "distance.csv"), std::ios::binary) << csv;
  if (p.config.outputs.trace) write_trace_csv(out_path(g, "trace.csv"), r.trace, {}, {});
  return r.status == SolveStatus::Completed ? kOk : kRunFailure;
}

int cmd_sweep(const GlobalOptions& g) {
  const json base = config_document(g);
  const RunConfig head = parse_config(base);

  // Cartesian product of parameter values, then seeds.
  std::vector<json> docs;
  std::vector<json> labels;
  docs.push_back(base);
  labels.push_back(json::object());
  for (const auto& param : head.sweep.parameters) {
    std::vector<json> next_docs;
    std::vector<json> next_labels;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      for (const auto& v : param.values) {
        json d = docs[i];
        set_path(d, param.path, v);
        json l = labels[i];
        l[param.path] = v;
        next_docs.push_back(std::move(d));
        next_labels.push_back(std::move(l));
      }
    }
    docs = std::move(next_docs);
    labels = std::move(next_labels);
  }
  std::vector<std::uint64_t> seeds = head.sweep.seeds;
  if (seeds.empty()) seeds.push_back(head.seed);
  struct Job {
    json doc;
    json label;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (auto s : seeds) {
      json d = docs[i];
      d["seed"] = s;
      d.erase("sweep");
      jobs.push_back({std::move(d), labels[i], s});
    }
  }

  std::vector<json> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      json row{{"run", k}, {"seed", jobs[k].seed}, {"parameters", jobs[k].label}};
      try {
        const Prepared p = prepare(parse_config(jobs[k].doc));
        const AttractResult r = run_attract(p);
        row.update(to_json(r));
      } catch (const ConfigError& e) {
        row["status"] = "config_error";
        row["diagnostic"] = e.what();
      } catch (const std::exception& e) {
        row["status"] = "run_failure";
        row["diagnostic"] = e.what();
      }
      results[k] = std::move(row);
    }
  };
  const std::size_t n_workers = std::max<std::size_t>(1, std::min(g.workers, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string csv = "run,seed";
  for (const auto& param : head.sweep.parameters) csv += "," + param.path;
  csv += ",status,omega_plus,in_gap_fraction,modulus_variation,rho_first,rho_last,apriori_violations\n";
  bool all_ok = true;
  for (const auto& row : results) {
    csv += std::to_string(row["run"].get<std::size_t>()) + "," + std::to_string(row["seed"].get<std::uint64_t>());
    for (const auto& param : head.sweep.parameters) {
      std::string cell = row["parameters"][param.path].dump();
      std::replace(cell.begin(), cell.end(), ',', ';');
      csv += "," + cell;
    }
    const std::string status = row["status"].get<std::string>();
    all_ok = all_ok && status == "completed";
    csv += "," + status;
    if (row.contains("omega_limit")) {
      const auto& ol = row["omega_limit"];
      const auto& ds = row["distances"];
      csv += "," + format_double(ol["omega_plus"].get<double>()) + "," +
             format_double(ol["in_gap_fraction"].get<double>()) + "," +
             format_double(ol["modulus_variation"].get<double>()) + "," +
             format_double(ds.front()["rho"].get<double>()) + "," + format_double(ds.back()["rho"].get<double>()) +
             "," + std::to_string(row["apriori_violations"].get<std::size_t>());
    } else {
      csv += ",,,,,,";
    }
    csv += "\n";
  }
  std::ofstream(out_path(g, "sweep.csv"), std::ios::binary) << csv;
  write_json(out_path(g, "sweep.json"), json{{"command", "sweep"}, {"runs", results}, {"config", base}});
  return all_ok ? kOk : kRunFailure;
}

int cmd_compare(const GlobalOptions& g) {
  const Prepared base = prepare(resolve_config(g));
  const RunConfig& c = base.config;
  const double horizon = c.compare.horizon.value_or(c.T);
  const double steps = std::round(horizon / c.dt);
  if (std::abs(horizon / c.dt - steps) > 1e-9 * std::max(1.0, steps)) {
    throw ConfigError({"compare.horizon must be a multiple of time.dt"});
  }
  std::vector<std::string> problems;
  for (std::size_t l = 0; l < c.compare.levels; ++l) {
    const double scale = std::ldexp(1.0, -static_cast<int>(l));
    if (c.dt * scale > 0.9 * base.grid.spacing() * scale * (1.0 + 1e-12)) {
      problems.push_back("level " + std::to_string(l) + ": dt exceeds 0.9 h required by the fd oracle");
    }
  }
  if (!problems.empty()) throw ConfigError(problems);

  std::string csv = "level,h,dt,discrepancy,ratio\n";
  json levels = json::array();
  double prev = 0.0;
  bool failed = false;
  for (std::size_t l = 0; l < c.compare.levels; ++l) {
    const std::size_t refine = std::size_t{1} << l;
    const Grid grid(base.grid.half_extent(), (base.grid.size() - 1) * refine + 1);
    const double dt = c.dt / static_cast<double>(refine);
    const FieldState init = build_initial(c, base.model, grid);
    SolveOptions opt = c.solver;
    opt.monitor_times.clear();
    const SolveReport v = solve_trace(base.model, init, horizon, dt, opt);
    FdOptions fo;
    fo.delta = c.compare.delta;
    fo.horizon_margin = c.solver.horizon_margin;
    const TraceSeries f = fd_trace(base.model, init, horizon, dt, fo);
    if (v.status != SolveStatus::Completed) failed = true;
    double disc = 0.0;
    for (std::size_t k = 0; k < std::min(v.trace.size(), f.size()); ++k) {
      disc = std::max(disc, std::abs(v.trace.z[k] - f.z[k]));
    }
    const double ratio = l == 0 ? NAN : prev / disc;
    csv += std::to_string(l) + "," + format_double(grid.spacing()) + "," + format_double(dt) + "," +
           format_double(disc) + "," + (l == 0 ? std::string() : format_double(ratio)) + "\n";
    levels.push_back({{"level", l},
                      {"h", grid.spacing()},
                      {"dt", dt},
                      {"discrepancy", disc},
                      {"ratio", l == 0 ? json(nullptr) : json(ratio)},
                      {"volterra_status", to_string(v.status)}});
    prev = disc;
  }
  std::ofstream(out_path(g, "compare.csv"), std::ios::binary) << csv;
  write_json(out_path(g, "compare.json"), json{{"command", "compare"},
                                               {"model", model_json(base.model)},
                                               {"horizon", horizon},
                                               {"delta", c.compare.delta == DeltaStencil::Point ? "point" : "smoothed"},
                                               {"levels", levels},
                                               {"config", c.source}});
  return failed ? kRunFailure : kOk;
}

}  // namespace pointkg::cli
