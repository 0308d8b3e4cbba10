#include "pointkg/bessel.hpp"

#include <cmath>
#include <numbers>

namespace pointkg {

namespace {

constexpr double kSeriesDouble = 8.0;
constexpr double kSeriesExtended = 17.0;

template <typename Real>
Real ascending_series(Real x) {
  const Real q = -x * x / Real(4);
  Real term = 1;
  Real sum = 1;
  for (int k = 1; k < 200; ++k) {
    term *= q / (Real(k) * Real(k));
    sum += term;
    if (std::abs(term) <= std::numeric_limits<Real>::epsilon() * std::abs(sum) && k > 2) break;
  }
  return sum;
}

// J0(x) ~ sqrt(2/(pi x)) (P cos(chi) - Q sin(chi)), chi = x - pi/4, with
// P = sum (-1)^k a_{2k} / x^{2k}, Q = -sum (-1)^k a_{2k+1} / x^{2k+1} and
// a_k = prod_{j=1..k} (2j-1)^2 / (k! 8^k). Summed until the terms stop
// decreasing; at x >= 17 the smallest term is below 1e-15.
double hankel_asymptotic(double x) {
  double p = 0.0;
  double q = 0.0;
  double term = 1.0;  // a_k / x^k
  double prev = INFINITY;
  for (int k = 0; k < 80; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      term *= odd * odd / (8.0 * k * x);
    }
    if (term > prev) break;
    prev = term;
    const int r = k % 4;
    if (r == 0) p += term;
    else if (r == 1) q -= term;
    else if (r == 2) p -= term;
    else q += term;
    if (term < 1e-17) break;
  }
  const double chi = x - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  if (x <= kSeriesDouble) return ascending_series<double>(x);
  if (x <= kSeriesExtended) return static_cast<double>(ascending_series<long double>(x));
  return hankel_asymptotic(x);
}

}  // namespace pointkg
