#pragma once

#include <span>
#include <vector>

namespace pointkg {

/// Dense real polynomial, coefficients in increasing degree (c[0] + c[1] s + ...).
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);

  double operator()(double s) const;
  Polynomial derivative() const;

  /// Degree after trimming exact trailing zeros; -1 for the zero polynomial.
  int degree() const;
  const std::vector<double>& coefficients() const { return coeffs_; }

  /// Upper bound on the modulus of every complex root (Cauchy bound).
  /// Zero polynomial and constants return 0.
  double root_bound() const;

  /// All distinct real roots in [lo, hi], ascending.
  ///
  /// Isolation recurses on the derivative: between consecutive critical points
  /// the polynomial is monotone, so each sign change brackets exactly one root,
  /// which is then bisected to `tolerance`. Critical points where the
  /// polynomial vanishes (even-multiplicity roots) are reported as roots too.
  std::vector<double> real_roots(double lo, double hi, double tolerance = 1e-14) const;

 private:
  std::vector<double> coeffs_;
};

}  // namespace pointkg
