#include "pointkg/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace pointkg {

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial{};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t n = 1; n < coeffs_.size(); ++n) d[n - 1] = static_cast<double>(n) * coeffs_[n];
  return Polynomial(std::move(d));
}

int Polynomial::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

double Polynomial::root_bound() const {
  if (degree() < 1) return 0.0;
  const double lead = std::abs(coeffs_.back());
  double worst = 0.0;
  for (std::size_t n = 0; n + 1 < coeffs_.size(); ++n) worst = std::max(worst, std::abs(coeffs_[n]) / lead);
  return 1.0 + worst;
}

namespace {

// Bisection on a bracket [a, b] with p(a), p(b) of opposite signs.
double bisect(const Polynomial& p, double a, double b, double pa, double tolerance) {
  while (b - a > tolerance) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double pm = p(mid);
    if (pm == 0.0) return mid;
    if ((pm < 0.0) == (pa < 0.0)) {
      a = mid;
      pa = pm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> Polynomial::real_roots(double lo, double hi, double tolerance) const {
  std::vector<double> roots;
  if (lo > hi || degree() < 1) return roots;

  // Breakpoints: interval ends plus every critical point inside.
  std::vector<double> breaks{lo};
  for (double c : derivative().real_roots(lo, hi, tolerance)) {
    if (c > lo && c < hi) breaks.push_back(c);
  }
  breaks.push_back(hi);

  auto push_unique = [&](double r) {
    if (roots.empty() || std::abs(r - roots.back()) > 10.0 * tolerance) roots.push_back(r);
  };

  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    const double pa = (*this)(a);
    const double pb = (*this)(b);
    if (pa == 0.0) {
      push_unique(a);
    } else if (pb != 0.0 && (pa < 0.0) != (pb < 0.0)) {
      push_unique(bisect(*this, a, b, pa, tolerance));
    } else if (i > 0) {
      // A critical point that only touches zero: accept when the value is at
      // roundoff level relative to the coefficients.
      double scale = 0.0;
      double power = 1.0;
      for (double c : coeffs_) {
        scale += std::abs(c) * power;
        power *= std::abs(a);
      }
      if (std::abs(pa) <= 64.0 * 2.2e-16 * scale) push_unique(a);
    }
  }
  if ((*this)(hi) == 0.0) push_unique(hi);
  return roots;
}

}  // namespace pointkg
