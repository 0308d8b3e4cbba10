#pragma once

#include <complex>
#include <optional>

#include "pointkg/kernel.hpp"
#include "pointkg/model.hpp"

namespace pointkg {

/// Hamiltonian (1/2) int (|pi|^2 + |psi'|^2 + m^2 |psi|^2) dx + U(psi(0)).
///
/// The integrals split at x = 0 (psi' kinks there) and at the state's fronts
/// (psi' and pi jump). Each smooth piece uses five-point derivatives, fourth-order
/// Gregory weights on its nodes, and Gauss points on the cells cut by a
/// breakpoint, evaluated on a cubic fitted from the same side.
double energy(const OscillatorModel& model, const FieldState& state);

/// Charge (i/2) int (conj(psi) pi - conj(pi) psi) dx = -int Im(conj(psi) pi) dx.
double charge(const FieldState& state);

/// E-norm, or the local seminorm over [-R, R] when `radius` is given.
double norm_e(const FieldState& state, double m, std::optional<double> radius = std::nullopt);

/// E inner product <a, b> = int conj(pi_a) pi_b + conj(psi_a') psi_b' + m^2 conj(psi_a) psi_b
/// over [-R, R] (or the full grid). Both states must share a grid.
std::complex<double> inner_e(const FieldState& a, const FieldState& b, double m,
                             std::optional<double> radius = std::nullopt);

/// L^2 norm squared of psi over the full grid.
double l2_norm_sq(const std::vector<cdouble>& values, const Grid& grid);

/// k(omega) = sqrt(omega^2 - m^2) on the boundary of the upper half plane:
/// i sqrt(m^2 - omega^2) inside the gap, sign(omega) sqrt(omega^2 - m^2) outside.
std::complex<double> k_of_omega(double omega, double m);
/// kappa(omega) = -i k(omega).
std::complex<double> kappa_of_omega(double omega, double m);
/// Density weight omega k(omega) for |omega| > m, 0 otherwise.
double ac_weight(double omega, double m);

}  // namespace pointkg
