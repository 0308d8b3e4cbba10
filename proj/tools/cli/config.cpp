#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "io.hpp"
#include "rng.hpp"

namespace pointkg::cli {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : "; ") + s;
  return out;
}

// Pulls typed fields out of one JSON object, recording problems instead of
// throwing so that a single pass reports everything.
class Section {
 public:
  Section(const json& node, std::string path, std::vector<std::string>& problems)
      : node_(node), path_(std::move(path)), problems_(problems) {
    if (!node_.is_object()) problem("", "must be an object");
  }

  ~Section() = default;
  Section(const Section&) = delete;
  Section& operator=(const Section&) = delete;

  bool has(const std::string& key) const { return node_.is_object() && node_.contains(key); }

  template <class T>
  std::optional<T> get(const std::string& key) {
    seen_.push_back(key);
    if (!has(key)) return std::nullopt;
    try {
      return node_.at(key).get<T>();
    } catch (const std::exception&) {
      problem(key, "has the wrong type");
      return std::nullopt;
    }
  }

  template <class T>
  void read(const std::string& key, T& target) {
    if (auto v = get<T>(key)) target = *v;
  }

  const json* child(const std::string& key) {
    seen_.push_back(key);
    return has(key) ? &node_.at(key) : nullptr;
  }

  void problem(const std::string& key, const std::string& what) {
    problems_.push_back((key.empty() ? path_ : path_ + "." + key) + " " + what);
  }

  std::string path(const std::string& key) const { return path_ + "." + key; }

  /// Flags keys that were never asked for.
  void finish() {
    if (!node_.is_object()) return;
    for (const auto& [key, _] : node_.items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) problem(key, "is not a known key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::vector<std::string>& problems_;
  std::vector<std::string> seen_;
};

std::optional<cdouble> parse_complex(const json& v) {
  if (v.is_number()) return cdouble{v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return cdouble{v[0].get<double>(), v[1].get<double>()};
  }
  if (v.is_object() && v.contains("re") && v.contains("im")) {
    return cdouble{v.at("re").get<double>(), v.at("im").get<double>()};
  }
  return std::nullopt;
}

void read_range(Section& s, const std::string& key, std::array<double, 2>& target) {
  const json* v = s.child(key);
  if (!v) return;
  if (v->is_number()) {
    target = {v->get<double>(), v->get<double>()};
  } else if (v->is_array() && v->size() == 2 && (*v)[0].is_number() && (*v)[1].is_number()) {
    target = {(*v)[0].get<double>(), (*v)[1].get<double>()};
  } else {
    s.problem(key, "must be a number or a [lo, hi] pair");
    return;
  }
  if (!(target[0] <= target[1]) || !std::isfinite(target[0]) || !std::isfinite(target[1])) {
    s.problem(key, "must satisfy lo <= hi with finite ends");
  }
}

GaussianSpec parse_gaussian(Section& s) {
  GaussianSpec g;
  if (const json* a = s.child("amplitude")) {
    if (auto c = parse_complex(*a)) {
      g.amplitude = *c;
    } else {
      s.problem("amplitude", "must be a number, [re, im] or {re, im}");
    }
  }
  s.read("width", g.width);
  s.read("center", g.center);
  s.read("momentum", g.momentum);
  s.read("omega_bar", g.omega_bar);
  if (!(g.width > 0.0) || !std::isfinite(g.width)) s.problem("width", "must be positive");
  if (!std::isfinite(g.center) || !std::isfinite(g.momentum) || !std::isfinite(g.omega_bar) ||
      !std::isfinite(std::abs(g.amplitude))) {
    s.problem("", "has non-finite Gaussian parameters");
  }
  return g;
}

SolitarySpec parse_solitary(Section& s) {
  SolitarySpec w;
  s.read("C", w.amplitude);
  s.read("theta", w.theta);
  if (auto b = s.get<std::string>("branch")) {
    if (*b == "plus") {
      w.branch = Branch::Plus;
    } else if (*b == "minus") {
      w.branch = Branch::Minus;
    } else {
      s.problem("branch", "must be \"plus\" or \"minus\"");
    }
  }
  if (!(w.amplitude > 0.0)) s.problem("C", "must be positive");
  return w;
}

InitialSpec parse_initial(const json& node, std::vector<std::string>& problems) {
  Section s(node, "initial", problems);
  const std::string type = s.get<std::string>("type").value_or("");
  InitialSpec out = ZeroSpec{};
  if (type == "zero") {
    out = ZeroSpec{};
  } else if (type == "gaussian") {
    out = parse_gaussian(s);
  } else if (type == "random_gaussian") {
    RandomGaussianSpec r;
    read_range(s, "amplitude", r.amplitude);
    read_range(s, "phase", r.phase);
    read_range(s, "width", r.width);
    read_range(s, "center", r.center);
    read_range(s, "momentum", r.momentum);
    read_range(s, "omega_bar", r.omega_bar);
    if (!(r.width[0] > 0.0)) s.problem("width", "must be positive");
    out = r;
  } else if (type == "solitary") {
    out = parse_solitary(s);
  } else if (type == "solitary_plus_bump") {
    SolitaryPlusBumpSpec sb;
    sb.wave = parse_solitary(s);
    if (const json* b = s.child("bump")) {
      Section bs(*b, s.path("bump"), problems);
      sb.bump = parse_gaussian(bs);
      bs.finish();
    } else {
      s.problem("bump", "is required");
    }
    out = sb;
  } else if (type == "file") {
    FileSpec f;
    s.read("path", f.path);
    if (f.path.empty()) s.problem("path", "is required");
    out = f;
  } else {
    s.problem("type", "must be one of zero, gaussian, random_gaussian, solitary, solitary_plus_bump, file");
  }
  s.finish();
  return out;
}

bool on_time_grid(double t, double dt) {
  const double k = t / dt;
  return std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, k);
}

double gaussian_radius(const GaussianSpec& g) {
  return std::abs(g.center) + g.width * std::sqrt(2.0 * std::log(1e14));
}

double solitary_radius(double kappa) { return std::log(1e14) / kappa; }

std::optional<SolitaryWave> pick_wave(const OscillatorModel& model, const SolitarySpec& spec) {
  for (const auto& w : waves_from_amplitude(model, spec.amplitude)) {
    if (w.branch == spec.branch || w.omega == 0.0) {
      SolitaryWave out = w;
      out.phase = std::remainder(spec.theta, 2.0 * std::numbers::pi);
      if (out.phase < 0.0) out.phase += 2.0 * std::numbers::pi;
      return out;
    }
  }
  return std::nullopt;
}

void add_gaussian(FieldState& state, const GaussianSpec& g) {
  for (std::size_t i = 0; i < state.grid.size(); ++i) {
    const double x = state.grid.x(i);
    const double d = (x - g.center) / g.width;
    const cdouble psi = g.amplitude * std::exp(-0.5 * d * d) * std::polar(1.0, g.momentum * x);
    state.psi[i] += psi;
    state.pi[i] += cdouble(0.0, -g.omega_bar) * psi;
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration: " + join(problems)), problems_(std::move(problems)) {}

void set_path(json& doc, const std::string& dotted, const json& value) {
  json* node = &doc;
  std::stringstream ss(dotted);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ConfigError({"override path is empty"});
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object()) throw ConfigError({"override path " + dotted + " crosses a non-object"});
    node = &(*node)[parts[i]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) throw ConfigError({"override path " + dotted + " crosses a non-object"});
  (*node)[parts.back()] = value;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError({"override '" + assignment + "' is not key=value"});
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  set_path(doc, key, value);
}

RunConfig parse_config(const json& doc) {
  std::vector<std::string> problems;
  RunConfig c;
  c.source = doc;
  if (!doc.is_object()) throw ConfigError({"configuration must be a JSON object"});
  Section root(doc, "config", problems);

  if (const json* m = root.child("model")) {
    Section s(*m, "model", problems);
    s.read("kind", c.model.kind);
    s.read("mass", c.model.mass);
    s.read("coefficients", c.model.coefficients);
    s.read("a", c.model.a);
    if (!(c.model.mass > 0.0) || !std::isfinite(c.model.mass)) s.problem("mass", "must be positive");
    if (c.model.kind == "polynomial") {
      const auto& u = c.model.coefficients;
      if (u.size() < 3) s.problem("coefficients", "needs degree N >= 2 (at least three entries)");
      if (!u.empty() && !(u.back() > 0.0)) s.problem("coefficients", "needs a positive leading coefficient");
      for (double v : u) {
        if (!std::isfinite(v)) s.problem("coefficients", "must be finite");
      }
      if (s.has("a")) s.problem("a", "applies to linear models only");
    } else if (c.model.kind == "linear") {
      if (!std::isfinite(c.model.a)) s.problem("a", "must be finite");
      if (!(c.model.a < 2.0 * c.model.mass)) s.problem("a", "must satisfy a < 2m");
      if (s.has("coefficients")) s.problem("coefficients", "applies to polynomial models only");
    } else {
      s.problem("kind", "must be \"polynomial\" or \"linear\"");
    }
    s.finish();
  }

  if (const json* g = root.child("grid")) {
    Section s(*g, "grid", problems);
    c.half_extent = s.get<double>("half_extent");
    c.n_points = s.get<std::size_t>("n_points");
    c.spacing = s.get<double>("spacing");
    if (c.n_points && c.spacing) s.problem("", "takes n_points or spacing, not both");
    if (c.n_points && (*c.n_points < 3 || *c.n_points % 2 == 0)) s.problem("n_points", "must be odd and >= 3");
    if (c.n_points && !c.half_extent) s.problem("n_points", "requires half_extent");
    if (c.spacing && !(*c.spacing > 0.0)) s.problem("spacing", "must be positive");
    if (c.half_extent && !(*c.half_extent > 0.0)) s.problem("half_extent", "must be positive");
    s.finish();
  }

  if (const json* t = root.child("time")) {
    Section s(*t, "time", problems);
    s.read("T", c.T);
    s.read("dt", c.dt);
    s.finish();
  }
  if (!(c.T > 0.0) || !std::isfinite(c.T)) problems.push_back("time.T must be positive");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) {
    problems.push_back("time.dt must be positive");
  } else if (c.T > 0.0 && !on_time_grid(c.T, c.dt)) {
    problems.push_back("time.T must be an integer multiple of time.dt");
  }

  if (const json* i = root.child("initial")) c.initial = parse_initial(*i, problems);
  root.read("seed", c.seed);

  if (const json* sv = root.child("solver")) {
    Section s(*sv, "solver", problems);
    s.read("drift_tolerance", c.solver.drift_tolerance);
    s.read("magnitude_slack", c.solver.magnitude_slack);
    s.read("horizon_margin", c.solver.horizon_margin);
    s.read("panel_width", c.solver.panel_width);
    if (!(c.solver.drift_tolerance > 0.0)) s.problem("drift_tolerance", "must be positive");
    if (!(c.solver.magnitude_slack >= 1.0)) s.problem("magnitude_slack", "must be >= 1");
    if (!(c.solver.horizon_margin >= 0.0)) s.problem("horizon_margin", "must be nonnegative");
    if (!(c.solver.panel_width > 0.0)) s.problem("panel_width", "must be positive");
    s.finish();
  }

  if (const json* o = root.child("outputs")) {
    Section s(*o, "outputs", problems);
    s.read("trace", c.outputs.trace);
    s.read("report", c.outputs.report);
    s.read("snapshots", c.outputs.snapshots);
    if (const json* sp = s.child("spectra")) {
      if (!sp->is_array()) {
        s.problem("spectra", "must be an array");
      } else {
        for (std::size_t k = 0; k < sp->size(); ++k) {
          Section w((*sp)[k], "outputs.spectra[" + std::to_string(k) + "]", problems);
          SpectrumRequest r;
          w.read("t_center", r.t_center);
          w.read("t_width", r.t_width);
          if (auto kind = w.get<std::string>("window")) {
            if (*kind == "hann") {
              r.window = WindowKind::Hann;
            } else if (*kind == "rect") {
              r.window = WindowKind::Rect;
            } else {
              w.problem("window", "must be \"hann\" or \"rect\"");
            }
          }
          if (!(r.t_width > 0.0)) w.problem("t_width", "must be positive");
          if (r.t_center - 0.5 * r.t_width < -1e-9 || r.t_center + 0.5 * r.t_width > c.T + 1e-9) {
            w.problem("", "must lie inside [0, T]");
          }
          w.finish();
          c.outputs.spectra.push_back(r);
        }
      }
    }
    s.finish();
  }
  for (double t : c.outputs.snapshots) {
    if (!(t >= 0.0 && t <= c.T) || (c.dt > 0.0 && !on_time_grid(t, c.dt))) {
      problems.push_back("outputs.snapshots entry " + std::to_string(t) + " must be a multiple of dt in [0, T]");
    }
  }

  if (const json* a = root.child("attract")) {
    Section s(*a, "attract", problems);
    s.read("radius", c.attract.radius);
    s.read("distance_times", c.attract.distance_times);
    s.read("windows", c.attract.windows);
    if (!(c.attract.radius > 0.0)) s.problem("radius", "must be positive");
    if (c.attract.windows < 1) s.problem("windows", "must be >= 1");
    for (double t : c.attract.distance_times) {
      if (!(t >= 0.0 && t <= c.T) || (c.dt > 0.0 && !on_time_grid(t, c.dt))) {
        s.problem("distance_times", "entries must be multiples of dt in [0, T]");
        break;
      }
    }
    s.finish();
  }

  if (const json* sw = root.child("sweep")) {
    Section s(*sw, "sweep", problems);
    s.read("seeds", c.sweep.seeds);
    if (const json* ps = s.child("parameters")) {
      if (!ps->is_array()) {
        s.problem("parameters", "must be an array");
      } else {
        for (std::size_t k = 0; k < ps->size(); ++k) {
          Section p((*ps)[k], "sweep.parameters[" + std::to_string(k) + "]", problems);
          SweepParameter param;
          p.read("path", param.path);
          if (const json* v = p.child("values"); v && v->is_array() && !v->empty()) {
            param.values.assign(v->begin(), v->end());
          } else {
            p.problem("values", "must be a non-empty array");
          }
          if (param.path.empty()) p.problem("path", "is required");
          p.finish();
          c.sweep.parameters.push_back(std::move(param));
        }
      }
    }
    s.finish();
  }

  if (const json* cmp = root.child("compare")) {
    Section s(*cmp, "compare", problems);
    s.read("levels", c.compare.levels);
    if (auto d = s.get<std::string>("delta")) {
      if (*d == "point") {
        c.compare.delta = DeltaStencil::Point;
      } else if (*d == "smoothed") {
        c.compare.delta = DeltaStencil::Smoothed;
      } else {
        s.problem("delta", "must be \"point\" or \"smoothed\"");
      }
    }
    c.compare.horizon = s.get<double>("horizon");
    if (c.compare.levels < 1) s.problem("levels", "must be >= 1");
    if (c.compare.horizon && !(*c.compare.horizon > 0.0 && *c.compare.horizon <= c.T)) {
      s.problem("horizon", "must lie in (0, T]");
    }
    s.finish();
  }
  root.finish();

  // Checks that need the model and the initial data.
  if (problems.empty()) {
    try {
      const OscillatorModel model = build_model(c.model);
      if (const auto* sol = std::get_if<SolitarySpec>(&c.initial); sol && !pick_wave(model, *sol)) {
        problems.push_back("initial: no solitary wave with this C and branch");
      }
      if (const auto* sb = std::get_if<SolitaryPlusBumpSpec>(&c.initial); sb && !pick_wave(model, sb->wave)) {
        problems.push_back("initial: no solitary wave with this C and branch");
      }
      if (problems.empty()) {
        const Grid grid = build_grid(c, model);
        const FieldState init = build_initial(c, model, grid);
        const double need = data_radius(init) + c.T + c.solver.horizon_margin;
        if (grid.half_extent() < need) {
          problems.push_back("grid.half_extent " + std::to_string(grid.half_extent()) +
                             " violates the horizon rule (needs >= " + std::to_string(need) + ")");
        }
        if (!init.is_finite()) problems.push_back("initial data is not finite");
      }
    } catch (const ConfigError& e) {
      problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    } catch (const std::exception& e) {
      problems.push_back(e.what());
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file " + path});
  json doc = json::parse(in, nullptr, false, true);
  if (doc.is_discarded()) throw ConfigError({"config file " + path + " is not valid JSON"});
  return parse_config(doc);
}

OscillatorModel build_model(const ModelSpec& spec) {
  if (spec.kind == "linear") return OscillatorModel::linear(spec.a, spec.mass);
  return OscillatorModel::polynomial(spec.coefficients, spec.mass);
}

GaussianSpec draw_gaussian(const RandomGaussianSpec& spec, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  GaussianSpec g;
  const double amplitude = rng.uniform(spec.amplitude[0], spec.amplitude[1]);
  const double phase = rng.uniform(spec.phase[0], spec.phase[1]);
  g.amplitude = std::polar(amplitude, phase);
  g.width = rng.uniform(spec.width[0], spec.width[1]);
  g.center = rng.uniform(spec.center[0], spec.center[1]);
  g.momentum = rng.uniform(spec.momentum[0], spec.momentum[1]);
  g.omega_bar = rng.uniform(spec.omega_bar[0], spec.omega_bar[1]);
  return g;
}

double initial_radius(const RunConfig& config, const OscillatorModel& model) {
  struct Visitor {
    const RunConfig& c;
    const OscillatorModel& m;
    double operator()(const ZeroSpec&) const { return 0.0; }
    double operator()(const GaussianSpec& g) const { return gaussian_radius(g); }
    double operator()(const RandomGaussianSpec& r) const { return gaussian_radius(draw_gaussian(r, c.seed)); }
    double operator()(const SolitarySpec& s) const {
      const auto w = pick_wave(m, s);
      if (!w) throw ConfigError({"initial: no solitary wave with this C and branch"});
      return solitary_radius(w->kappa);
    }
    double operator()(const SolitaryPlusBumpSpec& sb) const {
      return std::max((*this)(sb.wave), gaussian_radius(sb.bump));
    }
    double operator()(const FileSpec& f) const { return data_radius(read_snapshot_csv(f.path)); }
  };
  return std::visit(Visitor{config, model}, config.initial);
}

Grid build_grid(const RunConfig& config, const OscillatorModel& model) {
  if (const auto* f = std::get_if<FileSpec>(&config.initial)) {
    const Grid g = read_snapshot_csv(f->path).grid;
    if ((config.half_extent && std::abs(*config.half_extent - g.half_extent()) > 1e-9 * g.half_extent()) ||
        (config.n_points && *config.n_points != g.size())) {
      throw ConfigError({"grid does not match the grid of " + f->path});
    }
    return g;
  }
  if (config.n_points) return Grid(*config.half_extent, *config.n_points);
  const double h = config.spacing.value_or(0.05);
  const double extent = config.half_extent.value_or(initial_radius(config, model) + config.T +
                                                    config.solver.horizon_margin + 2.0 * h);
  return Grid::with_spacing(extent, h);
}

FieldState build_initial(const RunConfig& config, const OscillatorModel& model, const Grid& grid) {
  FieldState state(grid);
  struct Visitor {
    const RunConfig& c;
    const OscillatorModel& m;
    FieldState& s;
    void operator()(const ZeroSpec&) const {}
    void operator()(const GaussianSpec& g) const { add_gaussian(s, g); }
    void operator()(const RandomGaussianSpec& r) const { add_gaussian(s, draw_gaussian(r, c.seed)); }
    void operator()(const SolitarySpec& w) const {
      const auto wave = pick_wave(m, w);
      if (!wave) throw ConfigError({"initial: no solitary wave with this C and branch"});
      s = sample_profile(*wave, s.grid);
    }
    void operator()(const SolitaryPlusBumpSpec& sb) const {
      (*this)(sb.wave);
      add_gaussian(s, sb.bump);
    }
    void operator()(const FileSpec& f) const {
      FieldState loaded = read_snapshot_csv(f.path);
      if (!(loaded.grid == s.grid)) throw ConfigError({"grid does not match the grid of " + f.path});
      s = std::move(loaded);
      s.time = 0.0;
    }
  };
  std::visit(Visitor{config, model, state}, config.initial);
  return state;
}

}  // namespace pointkg::cli
