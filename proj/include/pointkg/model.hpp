#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace pointkg {

using cdouble = std::complex<double>;

enum class ModelKind { PolynomialNonlinear, Linear };

/// U(1)-invariant oscillator attached at x = 0.
///
/// PolynomialNonlinear: U(psi) = sum_n u_n |psi|^{2n}, F = alpha(|psi|^2) psi with
/// alpha(s) = -sum_{n>=1} 2 n u_n s^{n-1}. Requires N >= 2 and u_N > 0.
///
/// Linear(a): F(psi) = a psi, U(psi) = -a |psi|^2 / 2. Any real a is accepted;
/// the well-posedness window a < 2m is reported by check_bound_below().
class OscillatorModel {
 public:
  static OscillatorModel polynomial(std::vector<double> coefficients, double mass);
  static OscillatorModel linear(double a, double mass);

  ModelKind kind() const { return kind_; }
  double mass() const { return mass_; }
  /// u_0..u_N; empty for linear models.
  const std::vector<double>& coefficients() const { return coeffs_; }
  /// Coupling constant of a linear model (0 for polynomial models).
  double linear_coupling() const { return a_; }

  double potential(cdouble psi) const;
  cdouble force(cdouble psi) const;
  double alpha(double s) const;
  /// d alpha / ds, used for the exact Jacobian of the force.
  double alpha_derivative(double s) const;

  /// Coefficients of alpha(s) in increasing degree.
  std::vector<double> alpha_coefficients() const;

  bool operator==(const OscillatorModel&) const = default;

 private:
  OscillatorModel() = default;

  ModelKind kind_ = ModelKind::Linear;
  double mass_ = 1.0;
  std::vector<double> coeffs_;
  double a_ = 0.0;
};

/// Constants with U(psi) >= A - B |psi|^2 and 0 <= B < m.
struct BoundBelow {
  double A = 0.0;
  double B = 0.0;
};

/// Admissible lower-bound constants, or nullopt when none exist (the model lies
/// outside the well-posedness hypotheses).
std::optional<BoundBelow> check_bound_below(const OscillatorModel& model);

/// Bound on ||Psi(t)||_E^2 implied by energy conservation:
/// 2 m (H - A) / (m - B).
double apriori_norm_bound_sq(const OscillatorModel& model, const BoundBelow& bound, double energy);

std::string to_string(ModelKind kind);

}  // namespace pointkg
