#include "pointkg/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pointkg/polynomial.hpp"

namespace pointkg {

OscillatorModel OscillatorModel::polynomial(std::vector<double> coefficients, double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("model: mass must be positive");
  if (coefficients.size() < 3) throw std::invalid_argument("model: polynomial potential needs N >= 2");
  for (double u : coefficients) {
    if (!std::isfinite(u)) throw std::invalid_argument("model: non-finite coefficient");
  }
  if (!(coefficients.back() > 0.0)) throw std::invalid_argument("model: leading coefficient u_N must be positive");
  OscillatorModel m;
  m.kind_ = ModelKind::PolynomialNonlinear;
  m.mass_ = mass;
  m.coeffs_ = std::move(coefficients);
  return m;
}

OscillatorModel OscillatorModel::linear(double a, double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("model: mass must be positive");
  if (!std::isfinite(a)) throw std::invalid_argument("model: non-finite coupling");
  OscillatorModel m;
  m.kind_ = ModelKind::Linear;
  m.mass_ = mass;
  m.a_ = a;
  return m;
}

double OscillatorModel::potential(cdouble psi) const {
  const double s = std::norm(psi);
  if (kind_ == ModelKind::Linear) return -0.5 * a_ * s;
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double OscillatorModel::alpha(double s) const {
  if (kind_ == ModelKind::Linear) return a_;
  // -sum_{n>=1} 2 n u_n s^{n-1}, Horner from the top.
  double acc = 0.0;
  for (std::size_t n = coeffs_.size() - 1; n >= 1; --n) acc = acc * s - 2.0 * static_cast<double>(n) * coeffs_[n];
  return acc;
}

double OscillatorModel::alpha_derivative(double s) const {
  if (kind_ == ModelKind::Linear) return 0.0;
  double acc = 0.0;
  for (std::size_t n = coeffs_.size() - 1; n >= 2; --n) {
    acc = acc * s - 2.0 * static_cast<double>(n) * static_cast<double>(n - 1) * coeffs_[n];
  }
  return acc;
}

cdouble OscillatorModel::force(cdouble psi) const { return alpha(std::norm(psi)) * psi; }

std::vector<double> OscillatorModel::alpha_coefficients() const {
  if (kind_ == ModelKind::Linear) return {a_};
  std::vector<double> c(coeffs_.size() - 1);
  for (std::size_t n = 1; n < coeffs_.size(); ++n) c[n - 1] = -2.0 * static_cast<double>(n) * coeffs_[n];
  return c;
}

std::optional<BoundBelow> check_bound_below(const OscillatorModel& model) {
  const double m = model.mass();
  if (model.kind() == ModelKind::Linear) {
    const double a = model.linear_coupling();
    if (!(a < 2.0 * m)) return std::nullopt;
    return BoundBelow{0.0, a > 0.0 ? 0.5 * a : 0.0};
  }
  // u(s) = sum u_n s^n on s >= 0 is bounded below since u_N > 0 and N >= 2, so
  // B = 0 always works; A is the exact minimum over s = 0 and the critical points.
  const Polynomial u(model.coefficients());
  const Polynomial du = u.derivative();
  const double hi = std::max(1.0, du.root_bound());
  double best = u(0.0);
  for (double s : du.real_roots(0.0, hi)) best = std::min(best, u(s));
  return BoundBelow{best, 0.0};
}

double apriori_norm_bound_sq(const OscillatorModel& model, const BoundBelow& bound, double energy) {
  const double m = model.mass();
  return 2.0 * m * (energy - bound.A) / (m - bound.B);
}

std::string to_string(ModelKind kind) {
  return kind == ModelKind::Linear ? "linear" : "polynomial";
}

}  // namespace pointkg
