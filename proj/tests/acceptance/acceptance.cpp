// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "pointkg/fd.hpp"
#include "pointkg/observables.hpp"
#include "pointkg/solitary.hpp"
#include "pointkg/spectral.hpp"
#include "pointkg/volterra.hpp"

using namespace pointkg;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const OscillatorModel quartic = OscillatorModel::polynomial({0.0, -1.0, 1.0}, 1.0);
const double w0 = std::sqrt(0.75);

int failures = 0;

// Snapshot norms checked against the a priori bound, shared by every criterion.
struct AprioriLedger {
  std::size_t checked = 0;
  std::size_t violations = 0;
  void check(const OscillatorModel& m, const FieldState& init, const FieldState& s) {
    const auto b = check_bound_below(m);
    if (!b) return;
    ++checked;
    if (std::pow(norm_e(s, m.mass()), 2) > apriori_norm_bound_sq(m, *b, energy(m, init))) ++violations;
  }
} apriori;

// Lines are collected so they print in criterion order.
std::map<int, std::string> lines;

void report(int id, bool pass, const std::string& name, const std::string& detail) {
  if (!pass) ++failures;
  lines[id] = "criterion " + std::to_string(id) + " [" + (pass ? "PASS" : "FAIL") + "] " + name + ": " + detail;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

FieldState solitary_state(double T, double h = 0.05) {
  return sample_profile(waves_from_amplitude(quartic, 0.5).front(), Grid::with_spacing(62.0 + T, h));
}

FieldState gaussian(const Grid& g, cdouble A, double w, double x0, double omega_bar) {
  FieldState s(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = g.x(i) - x0;
    s.psi[i] = A * std::exp(-0.5 * d * d / (w * w));
    s.pi[i] = cdouble(0.0, -omega_bar) * s.psi[i];
  }
  return s;
}

double tracking_error(const TraceSeries& tr) {
  double e = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) e = std::max(e, std::abs(tr.z[k] - 0.5 * std::polar(1.0, -w0 * tr.time(k))));
  return e;
}

void solitary_exactness() {
  const FieldState init = solitary_state(50.0);
  const auto t0 = std::chrono::steady_clock::now();
  const SolveReport r = solve_trace(quartic, init, 50.0, 1e-3);
  const double runtime = seconds_since(t0);
  const double err = tracking_error(r.trace);
  const double e2 = tracking_error(solve_trace(quartic, init, 50.0, 2e-3).trace);
  const double e4 = tracking_error(solve_trace(quartic, init, 50.0, 4e-3).trace);
  const double o1 = std::log2(e4 / e2);
  const double o2 = std::log2(e2 / err);
  const bool pass = r.status == SolveStatus::Completed && r.trace.size() == 50001 && err < 5e-5 &&
                    std::abs(o1 - 2.0) <= 0.3 && std::abs(o2 - 2.0) <= 0.3 && runtime < 60.0;
  report(1, pass, "solitary exactness",
         fmt("max|z-Ce^{-iwt}| = %.3e (< 5e-5) at dt=1e-3, T=50; orders %.3f, %.3f over dt=4e-3,2e-3,1e-3 "
             "(2 +- 0.3); runtime %.2f s (< 60 s)",
             err, o1, o2, runtime));
}

void conservation() {
  const std::vector<double> times{10.0, 20.0, 30.0, 40.0, 50.0};
  double worst = 0.0;
  std::string detail;
  bool pass = true;
  struct Case {
    const char* name;
    FieldState init;
  };
  const Case cases[] = {{"solitary", solitary_state(50.0)},
                        {"gaussian x0=4", gaussian(Grid::with_spacing(64.0, 0.05), 0.5, 1.0, 4.0, 0.5)}};
  for (const Case& c : cases) {
    const auto [r, snaps] = solve_full(quartic, c.init, 50.0, 1e-3, times);
    for (const auto& s : snaps) apriori.check(quartic, c.init, s);
    pass = pass && r.status == SolveStatus::Completed && r.max_energy_drift < 1e-5 && r.max_charge_drift < 1e-5;
    worst = std::max({worst, r.max_energy_drift, r.max_charge_drift});
    detail += fmt("%s: energy %.2e, charge %.2e; ", c.name, r.max_energy_drift, r.max_charge_drift);
  }
  report(2, pass, "energy and charge conservation", detail + fmt("max relative drift %.2e (< 1e-5), dt=1e-3, T=50", worst));
}

void linear_case() {
  const OscillatorModel lin = OscillatorModel::linear(1.0, 1.0);
  const double T = 200.0;
  const FieldState init = gaussian(Grid::with_spacing(T + 12.0, 0.05), 0.5, 1.0, 0.0, 0.5);
  const SolveReport r = solve_trace(lin, init, T, 0.01);
  const TimeWindow w = late_window(r.trace);
  const SpectrumEstimate spec = windowed_spectrum(r.trace, 0.5 * (w.t0 + w.t1), w.t1 - w.t0 + 0.005);
  const double line_mass = line_mass_fraction(spec, {w0, -w0}, 2.0);
  const auto at = [&](double t) {
    const FieldState s = reconstruct_field(lin, init, r.trace, t, 6.0);
    apriori.check(lin, init, s);
    return distance_to_manifold(lin, s, 5.0).rho;
  };
  const double r20 = at(20.0);
  const double r180 = at(180.0);
  const bool pass = r.status == SolveStatus::Completed && line_mass >= 0.95 && r20 >= 10.0 * r180;
  report(4, pass, "linear case",
         fmt("a=1: mass within 2 bins of +-w_a = %.4f (>= 0.95); residual %.3e at t=20, %.3e at t=180, "
             "ratio %.1f (>= 10)",
             line_mass, r20, r180, r20 / r180));
}

void nonlinear_attraction() {
  using namespace pointkg::cli;
  const json doc = {
      {"model", {{"coefficients", {0.0, -1.0, 1.0}}, {"mass", 1.0}}},
      {"grid", {{"spacing", 0.05}}},
      {"time", {{"T", 400.0}, {"dt", 0.01}}},
      {"initial",
       {{"type", "random_gaussian"},
        {"amplitude", {0.4, 0.8}},
        {"phase", {0.0, kTwoPi}},
        {"width", {0.8, 1.5}},
        {"center", {-2.0, 2.0}},
        {"omega_bar", {0.6, 1.0}}}},
      {"attract", {{"distance_times", {20.0, 390.0}}, {"windows", 3}}},
  };
  bool pass = true;
  std::string failing;
  double min_gap = 1.0, max_var = 0.0, max_ratio = 0.0, worst_step = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    json d = doc;
    d["seed"] = seed;
    const Prepared p = prepare(parse_config(d));
    const AttractResult r = run_attract(p);
    apriori.checked += r.distances.size();
    apriori.violations += r.apriori_violations;
    bool ok = r.status == SolveStatus::Completed && r.window_gap_fractions.size() == 3;
    if (ok) {
      const double gap = r.final_report.in_gap_fraction;
      double step = 0.0;  // largest decrease between consecutive windows
      for (std::size_t k = 1; k < r.window_gap_fractions.size(); ++k) {
        step = std::max(step, r.window_gap_fractions[k - 1] - r.window_gap_fractions[k]);
      }
      const double var = r.final_report.modulus_variation;
      const double ratio = r.distances[1].rho / r.distances[0].rho;
      ok = gap >= 0.95 && step <= 1e-3 && var < 0.05 && ratio < 0.25;
      min_gap = std::min(min_gap, gap);
      max_var = std::max(max_var, var);
      max_ratio = std::max(max_ratio, ratio);
      worst_step = std::max(worst_step, step);
    }
    if (!ok) failing += " " + std::to_string(seed);
    pass = pass && ok;
  }
  report(5, pass, "nonlinear attraction",
         fmt("10 seeds, T=400: min final in-gap %.4f (>= 0.95), largest window decrease %.2e (<= 1e-3), "
             "max modulus variation %.4f (< 0.05), max rho(390)/rho(20) %.4f (< 0.25)",
             min_gap, worst_step, max_var, max_ratio) +
             (failing.empty() ? std::string() : "; failing seeds:" + failing));
}

void free_decay() {
  const double T = 80.0;
  const FieldState init = gaussian(Grid::with_spacing(T + 12.0, 0.05), 0.5, 1.0, 0.0, 0.5);
  const FreeEvolution free(init, 1.0);
  std::vector<double> lx, ly;
  for (double t = 20.0; t <= 80.0 + 1e-9; t += 2.0) {
    lx.push_back(std::log(t));
    ly.push_back(std::log(std::pow(norm_e(free.field(t, 6.0), 1.0, 5.0), 2)));
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  report(6, slope <= -0.8, "free local decay",
         fmt("fitted slope of log ||W(t)Psi||^2_{E,5} over t in [20,80]: %.3f (<= -0.8)", slope));
}

void oracle_equivalence() {
  const double T = 20.0;
  std::string detail;
  bool pass = true;
  for (int which = 0; which < 2; ++which) {
    double prev = 0.0;
    detail += which == 0 ? "gaussian x0=1:" : "; solitary:";
    for (int level = 0; level < 3; ++level) {
      const double h = 0.1 / (1 << level);
      const double dt = h / 2;
      const FieldState init = which == 0 ? gaussian(Grid::with_spacing(T + 12.0, h), 0.5, 1.0, 1.0, 0.5)
                                         : solitary_state(T, h);
      const TraceSeries v = solve_trace(quartic, init, T, dt).trace;
      const TraceSeries f = fd_trace(quartic, init, T, dt);
      double disc = 0.0;
      for (std::size_t k = 0; k < v.size(); ++k) disc = std::max(disc, std::abs(v.z[k] - f.z[k]));
      detail += fmt(" h=%g %.3e", h, disc);
      if (level > 0) {
        detail += fmt(" (ratio %.2f)", prev / disc);
        pass = pass && prev / disc >= 2.0;
      }
      prev = disc;
    }
  }
  report(7, pass, "oracle equivalence", detail + "; every ratio >= 2, dt = h/2, t <= 20");
}

void titchmarsh() {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::int64_t> coef(-1000000, 1000000);
  std::uniform_int_distribution<std::int64_t> offset(-1000, 1000);
  std::size_t holds = 0;
  const std::size_t pairs = 10000;
  for (std::size_t trial = 0; trial < pairs; ++trial) {
    IntegerSequence a, g;
    a.values.resize(1 + gen() % 40);
    g.values.resize(1 + gen() % 40);
    for (auto& v : a.values) v = gen() % 4 == 0 ? 0 : coef(gen);
    for (auto& v : g.values) v = gen() % 4 == 0 ? 0 : coef(gen);
    a.values[gen() % a.values.size()] = 1;
    g.values[gen() % g.values.size()] = -1;
    a.offset = offset(gen);
    g.offset = offset(gen);
    if (titchmarsh_check(a, g).endpoint_identity_holds) ++holds;
  }
  report(8, holds == pairs, "Titchmarsh verifier", fmt("endpoint identity held on %zu of %zu random pairs", holds, pairs));
}

void solitary_suites() {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_round = 0.0, worst_gauge = 0.0;
  std::size_t waves_checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> c(3 + trial % 3);
    for (auto& v : c) v = 4.0 * u(gen) - 2.0;
    c.back() = std::abs(c.back()) + 0.1;
    const OscillatorModel m = OscillatorModel::polynomial(c, 0.3 + 1.7 * u(gen));
    const double C = 0.05 + 2.0 * u(gen);
    for (const SolitaryWave& w : waves_from_amplitude(m, C)) {
      ++waves_checked;
      worst_round = std::max({worst_round, std::abs(m.alpha(C * C) - 2.0 * w.kappa),
                              std::abs(w.kappa * w.kappa + w.omega * w.omega - m.mass() * m.mass())});
      if (!(w.kappa > 0.0) || !(std::abs(w.omega) < m.mass())) worst_round = INFINITY;
      if (w.omega == 0.0) continue;
      double best = INFINITY;
      for (const SolitaryWave& b : waves_at_omega(m, w.omega).waves) best = std::min(best, std::abs(b.amplitude - C));
      worst_round = std::max(worst_round, best / std::max(1.0, C));
    }
    const cdouble psi{4.0 * u(gen) - 2.0, 4.0 * u(gen) - 2.0};
    const cdouble rot = std::polar(1.0, kTwoPi * u(gen));
    worst_gauge = std::max({worst_gauge, std::abs(m.force(rot * psi) - rot * m.force(psi)) / std::max(1.0, std::abs(m.force(psi))),
                            std::abs(m.potential(rot * psi) - m.potential(psi)) / std::max(1.0, std::abs(m.potential(psi)))});
  }
  const Grid g = Grid::with_spacing(12.0, 0.05);
  for (int trial = 0; trial < 10; ++trial) {
    SolitaryWave w = waves_from_amplitude(quartic, 0.1 + 0.55 * u(gen))[trial % 2];
    const FieldState base = sample_profile(w, g);
    FieldState bumped = base;
    for (std::size_t i = 0; i < g.size(); ++i) bumped.psi[i] += 0.02 * std::exp(-(g.x(i) - 1.0) * (g.x(i) - 1.0));
    const double theta = kTwoPi * u(gen);
    w.phase = theta;
    const FieldState turned = sample_profile(w, g);
    const FieldState rotated = base.rotated(theta);
    for (std::size_t i = 0; i < g.size(); ++i) {
      worst_gauge = std::max(worst_gauge, std::abs(turned.psi[i] - rotated.psi[i]) + std::abs(turned.pi[i] - rotated.pi[i]));
    }
    worst_gauge = std::max({worst_gauge, std::abs(energy(quartic, turned) - energy(quartic, base)),
                            std::abs(charge(turned) - charge(base)),
                            std::abs(distance_to_manifold(quartic, bumped, 5.0).rho -
                                     distance_to_manifold(quartic, bumped.rotated(theta), 5.0).rho)});
  }
  report(9, worst_round < 1e-10 && worst_gauge < 1e-10 && waves_checked > 50, "solitary manifold suites",
         fmt("%zu waves: round-trip residual %.2e, gauge residual %.2e (both < 1e-10)", waves_checked, worst_round,
             worst_gauge));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  solitary_exactness();
  conservation();
  linear_case();
  nonlinear_attraction();
  free_decay();
  oracle_equivalence();
  titchmarsh();
  solitary_suites();
  report(3, apriori.violations == 0 && apriori.checked > 0, "a priori bound",
         fmt("%zu snapshot norms from criteria 2, 4 and 5 checked, %zu violations", apriori.checked, apriori.violations));
  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  std::printf("acceptance: %d failing criteria, %.1f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
