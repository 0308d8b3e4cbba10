#pragma once

namespace pointkg {

/// Bessel function of the first kind, order zero.
///
/// Ascending power series for |x| <= 17 (double for |x| <= 8, extended precision
/// above that to contain cancellation) and the Hankel asymptotic expansion in
/// amplitude/phase form beyond. Absolute error below 1e-12 on |x| <= 1e4.
double bessel_j0(double x);

}  // namespace pointkg
