#include "pointkg/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "quadrature.hpp"

namespace pointkg {

Grid::Grid(double half_extent, std::size_t n_points) : half_extent_(half_extent), n_(n_points), h_(0.0) {
  if (!(half_extent > 0.0) || !std::isfinite(half_extent)) throw std::invalid_argument("grid: half extent must be positive");
  if (n_points < 3 || n_points % 2 == 0) throw std::invalid_argument("grid: node count must be odd and >= 3");
  h_ = 2.0 * half_extent / static_cast<double>(n_points - 1);
}

Grid Grid::window(double radius) const {
  if (!(radius > 0.0)) throw std::invalid_argument("grid: window radius must be positive");
  const auto half = static_cast<std::size_t>(std::floor(radius / h_ + 1e-9));
  const std::size_t k = std::min(half, center());
  if (k == 0) throw std::invalid_argument("grid: window narrower than one cell");
  return Grid(static_cast<double>(k) * h_, 2 * k + 1);
}

Grid Grid::with_spacing(double half_extent, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("grid: spacing must be positive");
  auto half = static_cast<std::size_t>(std::ceil(half_extent / spacing - 1e-9));
  return Grid(static_cast<double>(half) * spacing, 2 * half + 1);
}

bool FieldState::is_finite() const {
  auto finite = [](cdouble v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
  return std::all_of(psi.begin(), psi.end(), finite) && std::all_of(pi.begin(), pi.end(), finite) &&
         std::isfinite(time);
}

FieldState FieldState::rotated(double theta) const {
  FieldState out = *this;
  const cdouble phase = std::polar(1.0, theta);
  for (auto& v : out.psi) v *= phase;
  for (auto& v : out.pi) v *= phase;
  return out;
}

FieldState FieldState::cropped(double radius) const {
  const Grid g = grid.window(radius);
  FieldState out(g, time);
  const std::size_t offset = grid.center() - g.center();
  std::copy_n(psi.begin() + static_cast<std::ptrdiff_t>(offset), g.size(), out.psi.begin());
  std::copy_n(pi.begin() + static_cast<std::ptrdiff_t>(offset), g.size(), out.pi.begin());
  for (double xf : fronts) {
    if (std::abs(xf) < g.half_extent()) out.fronts.push_back(xf);
  }
  return out;
}

double data_radius(const FieldState& state, double rel_tol) {
  double peak = 0.0;
  for (std::size_t i = 0; i < state.grid.size(); ++i) {
    peak = std::max({peak, std::abs(state.psi[i]), std::abs(state.pi[i])});
  }
  if (peak == 0.0) return 0.0;
  double radius = 0.0;
  for (std::size_t i = 0; i < state.grid.size(); ++i) {
    if (std::abs(state.psi[i]) > rel_tol * peak || std::abs(state.pi[i]) > rel_tol * peak) {
      radius = std::max(radius, std::abs(state.grid.x(i)));
    }
  }
  return radius;
}

void check_horizon(const FieldState& state, double t_max, double margin) {
  const double r0 = data_radius(state);
  const double need = r0 + t_max + margin;
  if (state.grid.half_extent() < need) {
    throw HorizonError("horizon: half extent " + std::to_string(state.grid.half_extent()) +
                       " < data radius " + std::to_string(r0) + " + T " + std::to_string(t_max) + " + margin " +
                       std::to_string(margin));
  }
}

double green_g(double x, double t, double m) {
  if (t <= std::abs(x)) return 0.0;
  return 0.5 * bessel_j0(m * std::sqrt((t - x) * (t + x)));
}

namespace {

// Angular wavenumber of DFT index j on the periodic grid (odd n: no Nyquist mode).
double wavenumber(const Grid& g, std::size_t j) {
  const auto n = static_cast<long>(g.size());
  long s = static_cast<long>(j);
  if (s > (n - 1) / 2) s -= n;
  return 2.0 * std::numbers::pi * static_cast<double>(s) / g.period();
}

void require_finite(const FieldState& state) {
  if (!state.is_finite()) throw std::invalid_argument("free propagation: non-finite field data");
}

}  // namespace

FieldState free_evolve(const FieldState& state, double dt, double m) {
  require_finite(state);
  if (!std::isfinite(dt)) throw std::invalid_argument("free_evolve: non-finite time step");
  FieldState out = state;
  out.time = state.time + dt;
  if (dt == 0.0) return out;

  std::vector<cdouble> ps = state.psi;
  std::vector<cdouble> pp = state.pi;
  detail::dft_inplace(ps, -1);
  detail::dft_inplace(pp, -1);
  const double inv_n = 1.0 / static_cast<double>(state.grid.size());
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const double k = wavenumber(state.grid, j);
    const double w = std::sqrt(k * k + m * m);
    const double c = std::cos(w * dt);
    const double s = std::sin(w * dt);
    const cdouble a = ps[j];
    const cdouble b = pp[j];
    ps[j] = (a * c + b * (s / w)) * inv_n;
    pp[j] = (-a * (w * s) + b * c) * inv_n;
  }
  detail::dft_inplace(ps, +1);
  detail::dft_inplace(pp, +1);
  out.psi = std::move(ps);
  out.pi = std::move(pp);
  return out;
}

namespace {

// Center-node mode amplitudes: psi(0,t) = sum_j P_j cos(w_j t) + Q_j sin(w_j t),
// with +-k modes merged.
struct TraceModes {
  std::vector<double> omega;
  std::vector<cdouble> p;
  std::vector<cdouble> q;
};

TraceModes trace_modes(const FieldState& initial, double m) {
  require_finite(initial);
  const Grid& g = initial.grid;
  const std::size_t n = g.size();
  std::vector<cdouble> ps = initial.psi;
  std::vector<cdouble> pp = initial.pi;
  detail::dft_inplace(ps, -1);
  detail::dft_inplace(pp, -1);

  TraceModes modes;
  const std::size_t half = (n - 1) / 2;
  modes.omega.resize(half + 1);
  modes.p.resize(half + 1);
  modes.q.resize(half + 1);
  const double inv_n = 1.0 / static_cast<double>(n);
  auto center_phase = [&](std::size_t j) {
    // e^{2 pi i c j / n}, reduced modulo n for accuracy.
    const std::size_t r = (g.center() * j) % n;
    return std::polar(inv_n, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
  };
  for (std::size_t j = 0; j <= half; ++j) {
    const double k = wavenumber(g, j);
    const double w = std::sqrt(k * k + m * m);
    cdouble psum = ps[j] * center_phase(j);
    cdouble qsum = pp[j] * center_phase(j);
    if (j > 0) {
      psum += ps[n - j] * center_phase(n - j);
      qsum += pp[n - j] * center_phase(n - j);
    }
    modes.omega[j] = w;
    modes.p[j] = psum;
    modes.q[j] = qsum / w;
  }
  return modes;
}

cdouble trace_at(const TraceModes& modes, double t) {
  cdouble acc = 0.0;
  for (std::size_t j = 0; j < modes.omega.size(); ++j) {
    const double wt = modes.omega[j] * t;
    acc += modes.p[j] * std::cos(wt) + modes.q[j] * std::sin(wt);
  }
  return acc;
}

}  // namespace

std::vector<cdouble> free_trace(const FieldState& initial, std::span<const double> times, double m) {
  if (times.size() >= 3) {
    const double dt = times[1] - times[0];
    bool uniform = times[0] == 0.0 && dt > 0.0;
    for (std::size_t k = 0; uniform && k < times.size(); ++k) {
      uniform = std::abs(times[k] - static_cast<double>(k) * dt) <= 1e-12 * std::max(1.0, times[k]);
    }
    if (uniform) return free_trace_uniform(initial, dt, times.size() - 1, m);
  }
  const TraceModes modes = trace_modes(initial, m);
  std::vector<cdouble> out(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) out[k] = trace_at(modes, times[k]);
  return out;
}

std::vector<cdouble> free_trace_uniform(const FieldState& initial, double dt, std::size_t n_steps, double m) {
  if (!(dt > 0.0)) throw std::invalid_argument("free_trace: time step must be positive");
  const TraceModes modes = trace_modes(initial, m);
  const std::size_t nm = modes.omega.size();
  std::vector<cdouble> out(n_steps + 1);

  // Each mode u_j(t) = P cos + Q sin obeys u(t + dt) = 2 cos(w dt) u(t) - u(t - dt).
  // The three-term recurrence is restarted from exact values every block so
  // roundoff growth stays bounded.
  constexpr std::size_t kBlock = 128;
  std::vector<double> c2(nm);
  std::vector<double> cur_re(nm), cur_im(nm), prev_re(nm), prev_im(nm);
  for (std::size_t j = 0; j < nm; ++j) c2[j] = 2.0 * std::cos(modes.omega[j] * dt);

  auto exact = [&](std::size_t j, double t) {
    const double wt = modes.omega[j] * t;
    return modes.p[j] * std::cos(wt) + modes.q[j] * std::sin(wt);
  };

  for (std::size_t k = 0; k <= n_steps; ++k) {
    if (k % kBlock == 0) {
      const double t = static_cast<double>(k) * dt;
      double sre = 0.0;
      double sim = 0.0;
      for (std::size_t j = 0; j < nm; ++j) {
        const cdouble now = exact(j, t);
        const cdouble before = exact(j, t - dt);
        cur_re[j] = now.real();
        cur_im[j] = now.imag();
        prev_re[j] = before.real();
        prev_im[j] = before.imag();
        sre += now.real();
        sim += now.imag();
      }
      out[k] = {sre, sim};
      continue;
    }
    double sre = 0.0;
    double sim = 0.0;
    for (std::size_t j = 0; j < nm; ++j) {
      const double nre = c2[j] * cur_re[j] - prev_re[j];
      const double nim = c2[j] * cur_im[j] - prev_im[j];
      prev_re[j] = cur_re[j];
      prev_im[j] = cur_im[j];
      cur_re[j] = nre;
      cur_im[j] = nim;
      sre += nre;
      sim += nim;
    }
    out[k] = {sre, sim};
  }
  return out;
}

}  // namespace pointkg

namespace pointkg {

namespace {

// Fourth-order one-sided slopes at the center node.
cdouble derivative_jump(const std::vector<cdouble>& v, std::size_t c, double h) {
  auto one_sided = [&](int dir) {
    auto at = [&](int k) { return v[static_cast<std::size_t>(static_cast<long>(c) + dir * k)]; };
    return (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / (12.0 * h * dir);
  };
  return one_sided(+1) - one_sided(-1);
}

}  // namespace

FreeEvolution::FreeEvolution(const FieldState& initial, double m)
    : initial_(initial), remainder_(initial), m_(m), b_(0.8 * m), wb_(0.6 * m) {
  require_finite(initial);
  if (!(m > 0.0)) throw std::invalid_argument("free evolution: mass must be positive");
  const Grid& g = initial.grid;
  if (g.size() < 9) throw std::invalid_argument("free evolution: grid too coarse");
  psi_jump_ = derivative_jump(initial.psi, g.center(), g.spacing());
  pi_jump_ = derivative_jump(initial.pi, g.center(), g.spacing());
  // e^{-b|x|} has derivative jump -2b.
  c_psi_ = -psi_jump_ / (2.0 * b_);
  c_pi_ = -pi_jump_ / (2.0 * b_);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double phi = std::exp(-b_ * std::abs(g.x(i)));
    remainder_.psi[i] -= c_psi_ * phi;
    remainder_.pi[i] -= c_pi_ * phi;
  }
}

std::vector<cdouble> FreeEvolution::trace_uniform(double dt, std::size_t n_steps) const {
  std::vector<cdouble> out = free_trace_uniform(remainder_, dt, n_steps, m_);
  if (c_psi_ == 0.0 && c_pi_ == 0.0) return out;

  // A(t) = int_0^t J0(m tau) e^{-i w_b tau} d tau, accumulated step by step;
  // int_0^t J0(m(t-s)) e^{i w_b s} ds = e^{i w_b t} A(t).
  const auto& gl = detail::gauss_legendre();
  const auto sub = static_cast<std::size_t>(std::max(1.0, std::ceil(dt / 0.25)));
  const double width = dt / static_cast<double>(sub);
  cdouble acc = 0.0;
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (k > 0) {
      for (std::size_t p = 0; p < sub; ++p) {
        const double a = t - dt + width * static_cast<double>(p);
        for (int q = 0; q < detail::GaussLegendre::kPoints; ++q) {
          const double tau = a + 0.5 * width * (gl.node[q] + 1.0);
          acc += 0.5 * width * gl.weight[q] * bessel_j0(m_ * tau) * std::polar(1.0, -wb_ * tau);
        }
      }
    }
    const cdouble integral = std::polar(1.0, wb_ * t) * acc;
    const double c = std::cos(wb_ * t);
    const double s = std::sin(wb_ * t);
    // G(0, tau) = J0(m tau)/2, so 2b int G(...) = b int J0(...).
    const cdouble k_psi = c - b_ * integral.real();
    const cdouble k_pi = (s - b_ * integral.imag()) / wb_;
    out[k] += c_psi_ * k_psi + c_pi_ * k_pi;
  }
  return out;
}

FieldState FreeEvolution::field(double t, std::optional<double> radius, double panel_width) const {
  if (t == 0.0) return radius ? initial_.cropped(*radius) : initial_;
  FieldState out = free_evolve(remainder_, t, m_);
  if (radius) out = out.cropped(*radius);
  out.time = initial_.time + t;
  if (c_psi_ == 0.0 && c_pi_ == 0.0) return out;
  out.fronts = {-t, t};

  const auto& gl = detail::gauss_legendre();
  const Grid& g = out.grid;
  const double ct = std::cos(wb_ * t);
  const double st = std::sin(wb_ * t);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = std::abs(g.x(i));
    const double phi = std::exp(-b_ * x);
    double cc = 0.0;  // int G(x, t - s) cos(w_b s) ds
    double ss = 0.0;  // int G(x, t - s) sin(w_b s) ds
    double g_edge = 0.0;
    if (x < t) {
      g_edge = 0.5 * bessel_j0(m_ * std::sqrt((t - x) * (t + x)));
      const double span = t - x;
      const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(span / panel_width)));
      const double width = span / static_cast<double>(panels);
      for (std::size_t p = 0; p < panels; ++p) {
        const double a = x + width * static_cast<double>(p);
        for (int q = 0; q < detail::GaussLegendre::kPoints; ++q) {
          const double tau = a + 0.5 * width * (gl.node[q] + 1.0);
          const double w =
              0.25 * width * gl.weight[q] * bessel_j0(m_ * std::sqrt(std::max(0.0, (tau - x) * (tau + x))));
          const double arg = wb_ * (t - tau);
          cc += w * std::cos(arg);
          ss += w * std::sin(arg);
        }
      }
    }
    const double k_psi = phi * ct - 2.0 * b_ * cc;
    const double k_pi = (phi * st - 2.0 * b_ * ss) / wb_;
    const double dk_psi = -wb_ * phi * st - 2.0 * b_ * (g_edge - wb_ * ss);
    const double dk_pi = phi * ct - 2.0 * b_ * cc;
    out.psi[i] += c_psi_ * k_psi + c_pi_ * k_pi;
    out.pi[i] += c_psi_ * dk_psi + c_pi_ * dk_pi;
  }
  return out;
}

}  // namespace pointkg
