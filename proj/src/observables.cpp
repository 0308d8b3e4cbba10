#include "pointkg/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace pointkg {

namespace {

struct NodeRange {
  std::size_t lo;
  std::size_t hi;
};

NodeRange node_range(const Grid& g, std::optional<double> radius) {
  if (!radius) return {0, g.size() - 1};
  if (*radius > g.half_extent() * (1.0 + 1e-12)) throw std::invalid_argument("seminorm radius exceeds grid");
  auto k = static_cast<std::size_t>(std::floor(*radius / g.spacing() + 1e-9));
  k = std::min(k, g.center());
  return {g.center() - k, g.center() + k};
}

// Psi is piecewise smooth: psi' kinks at the origin, and across a front both
// psi' and pi jump. Each smooth piece gets a fourth-order rule: one-sided or
// central five-point derivatives, Gregory end weights on its nodes, and Gauss
// points on the partial cells that reach the breakpoints.
struct Breakpoint {
  double x;
  bool jump;  // the node value (if any) at x belongs to neither side
};

struct Piece {
  double a;
  double b;
  std::size_t j0;
  std::size_t j1;
};

std::vector<Piece> pieces(const Grid& g, NodeRange r, const std::vector<double>& fronts) {
  const double h = g.spacing();
  const double xlo = g.x(r.lo);
  const double xhi = g.x(r.hi);
  std::vector<Breakpoint> bps;
  if (xlo < 0.0 && xhi > 0.0) bps.push_back({0.0, false});
  for (double xf : fronts) {
    if (std::abs(xf) < 6.0 * h || xf <= xlo + 6.0 * h || xf >= xhi - 6.0 * h) continue;
    bps.push_back({xf, true});
  }
  std::sort(bps.begin(), bps.end(), [](const Breakpoint& p, const Breakpoint& q) { return p.x < q.x; });
  // Breakpoints closer than a few cells cannot carry a piece between them.
  std::vector<Breakpoint> kept;
  for (const auto& bp : bps) {
    if (!kept.empty() && bp.x - kept.back().x < 6.0 * h) continue;
    kept.push_back(bp);
  }
  std::vector<Piece> out;
  auto node_at = [&](double x) { return x / h + static_cast<double>(g.center()); };
  double a = xlo;
  std::size_t j0 = r.lo;
  for (std::size_t k = 0; k <= kept.size(); ++k) {
    double b = xhi;
    std::size_t j1 = r.hi;
    std::size_t next = r.hi;
    if (k < kept.size()) {
      b = kept[k].x;
      const double u = node_at(b);
      const double fl = std::floor(u + 1e-9);
      const bool on_node = std::abs(u - std::round(u)) < 1e-9;
      const auto below = static_cast<std::size_t>(fl);
      if (on_node && !kept[k].jump) {
        j1 = below;
        next = below;
      } else if (on_node) {
        j1 = below - 1;
        next = below + 1;
      } else {
        j1 = below;
        next = below + 1;
      }
    }
    out.push_back({a, b, j0, j1});
    a = b;
    j0 = next;
  }
  return out;
}

std::vector<cdouble> derivative(const std::vector<cdouble>& u, std::size_t j0, std::size_t j1, double h) {
  const std::size_t n = j1 - j0 + 1;
  std::vector<cdouble> d(n);
  auto at = [&](std::size_t k) { return u[j0 + k]; };
  for (std::size_t k = 0; k < n; ++k) {
    if (k >= 2 && k + 2 < n) {
      d[k] = (at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) / (12.0 * h);
    } else if (k < 2) {
      // Five-point one-sided stencils anchored at the piece start.
      if (k == 0) {
        d[k] = (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / (12.0 * h);
      } else {
        d[k] = (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / (12.0 * h);
      }
    } else {
      const std::size_t e = n - 1;
      if (k == e) {
        d[k] = (25.0 * at(e) - 48.0 * at(e - 1) + 36.0 * at(e - 2) - 16.0 * at(e - 3) + 3.0 * at(e - 4)) / (12.0 * h);
      } else {
        d[k] = (3.0 * at(e) + 10.0 * at(e - 1) - 18.0 * at(e - 2) + 6.0 * at(e - 3) - at(e - 4)) / (12.0 * h);
      }
    }
  }
  return d;
}

// Cubic through four samples at s = 0,1,2,3 (units of h), value and d/ds.
std::pair<cdouble, cdouble> cubic(const cdouble* y, double s) {
  const double l0 = -(s - 1) * (s - 2) * (s - 3) / 6.0;
  const double l1 = s * (s - 2) * (s - 3) / 2.0;
  const double l2 = -s * (s - 1) * (s - 3) / 2.0;
  const double l3 = s * (s - 1) * (s - 2) / 6.0;
  const double d0 = -((s - 2) * (s - 3) + (s - 1) * (s - 3) + (s - 1) * (s - 2)) / 6.0;
  const double d1 = ((s - 2) * (s - 3) + s * (s - 3) + s * (s - 2)) / 2.0;
  const double d2 = -((s - 1) * (s - 3) + s * (s - 3) + s * (s - 1)) / 2.0;
  const double d3 = ((s - 1) * (s - 2) + s * (s - 2) + s * (s - 1)) / 6.0;
  return {l0 * y[0] + l1 * y[1] + l2 * y[2] + l3 * y[3], d0 * y[0] + d1 * y[1] + d2 * y[2] + d3 * y[3]};
}

struct Integrals {
  cdouble values;
  cdouble slopes;
};

Integrals piece_integrals(const Grid& g, const Piece& p, const std::vector<cdouble>& u,
                          const std::vector<cdouble>& v) {
  const double h = g.spacing();
  const std::size_t n = p.j1 - p.j0 + 1;
  Integrals acc{0.0, 0.0};
  if (p.j1 < p.j0 || n < 6) {
    // Too short for the high-order rule; plain trapezoid and cell slopes.
    for (std::size_t i = p.j0; i < p.j1; ++i) {
      acc.values += 0.5 * h * (std::conj(u[i]) * v[i] + std::conj(u[i + 1]) * v[i + 1]);
      acc.slopes += std::conj(u[i + 1] - u[i]) * (v[i + 1] - v[i]) / h;
    }
    return acc;
  }
  const auto du = derivative(u, p.j0, p.j1, h);
  const auto dv = derivative(v, p.j0, p.j1, h);
  static constexpr std::array<double, 3> gregory{3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  for (std::size_t k = 0; k < n; ++k) {
    double w = 1.0;
    if (k < 3) w = gregory[k];
    if (n - 1 - k < 3) w = gregory[n - 1 - k];
    const std::size_t i = p.j0 + k;
    acc.values += w * h * std::conj(u[i]) * v[i];
    acc.slopes += w * h * std::conj(du[k]) * dv[k];
  }

  static const std::array<double, 3> gx{-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static constexpr std::array<double, 3> gw{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  auto partial = [&](double lo, double hi, std::size_t base, double origin) {
    if (hi - lo <= 1e-12 * h) return;
    for (std::size_t q = 0; q < 3; ++q) {
      const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gx[q];
      const double s = (x - origin) / h;
      const auto [uv, ud] = cubic(&u[base], s);
      const auto [vv, vd] = cubic(&v[base], s);
      const double w = 0.5 * (hi - lo) * gw[q];
      acc.values += w * std::conj(uv) * vv;
      acc.slopes += w * std::conj(ud) * vd / (h * h);
    }
  };
  partial(p.a, g.x(p.j0), p.j0, g.x(p.j0));
  partial(g.x(p.j1), p.b, p.j1 - 3, g.x(p.j1 - 3));
  return acc;
}

Integrals integrals(const Grid& g, NodeRange r, const std::vector<double>& fronts, const std::vector<cdouble>& u,
                    const std::vector<cdouble>& v) {
  Integrals acc{0.0, 0.0};
  for (const Piece& p : pieces(g, r, fronts)) {
    const Integrals part = piece_integrals(g, p, u, v);
    acc.values += part.values;
    acc.slopes += part.slopes;
  }
  return acc;
}

}  // namespace

std::complex<double> inner_e(const FieldState& a, const FieldState& b, double m, std::optional<double> radius) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("inner_e: grid mismatch");
  const NodeRange r = node_range(a.grid, radius);
  const auto& fronts = a.fronts.empty() ? b.fronts : a.fronts;
  const Integrals p = integrals(a.grid, r, fronts, a.pi, b.pi);
  const Integrals q = integrals(a.grid, r, fronts, a.psi, b.psi);
  return p.values + m * m * q.values + q.slopes;
}

double norm_e(const FieldState& state, double m, std::optional<double> radius) {
  return std::sqrt(std::max(0.0, inner_e(state, state, m, radius).real()));
}

double energy(const OscillatorModel& model, const FieldState& state) {
  const double e2 = inner_e(state, state, model.mass()).real();
  return 0.5 * e2 + model.potential(state.psi[state.grid.center()]);
}

double charge(const FieldState& state) {
  const NodeRange r = node_range(state.grid, std::nullopt);
  return -integrals(state.grid, r, state.fronts, state.psi, state.pi).values.imag();
}

double l2_norm_sq(const std::vector<cdouble>& values, const Grid& grid) {
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = (i == 0 || i + 1 == values.size()) ? 0.5 : 1.0;
    acc += w * std::norm(values[i]);
  }
  return acc * grid.spacing();
}

std::complex<double> k_of_omega(double omega, double m) {
  const double d = omega * omega - m * m;
  if (d <= 0.0) return {0.0, std::sqrt(-d)};
  return {std::copysign(std::sqrt(d), omega), 0.0};
}

std::complex<double> kappa_of_omega(double omega, double m) {
  return std::complex<double>(0.0, -1.0) * k_of_omega(omega, m);
}

double ac_weight(double omega, double m) {
  if (std::abs(omega) <= m) return 0.0;
  return omega * k_of_omega(omega, m).real();
}

}  // namespace pointkg
