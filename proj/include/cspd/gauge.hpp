#pragma once

#include <array>

#include "cspd/field.hpp"

namespace cspd {

/// Static Chern-Simons-Proca potentials reconstructed from the currents.
struct GaugeFields {
  RealField a0, a1, a2;
  double lambda = 1.0;
};

/// (lambda^2 - Delta) A_1 = lambda J^1 - d_2 J^0
/// (lambda^2 - Delta) A_2 = lambda J^2 + d_1 J^0
/// (lambda^2 - Delta) A_0 = -lambda J^0 + d_2 J^1 - d_1 J^2
/// solved by Fourier division by lambda^2 + |k|^2.
GaugeFields solve_static_gauge(const RealField& j0, const RealField& j1, const RealField& j2,
                               double lambda);

/// L^2 norms of the static-system equations evaluated on A and J.
struct GaugeResidual {
  double curl1 = 0.0;       ///< ||d_1 A_0 + lambda A_2 - J^2||
  double curl2 = 0.0;       ///< ||d_2 A_0 - lambda A_1 + J^1||
  double charge = 0.0;      ///< ||F_12 + lambda A_0 + J^0||
  double divergence = 0.0;  ///< ||d_1 A_1 + d_2 A_2||, logged only
};

GaugeResidual gauge_residual(const GaugeFields& a, const RealField& j0, const RealField& j1,
                             const RealField& j2);

// Lower-level spectral pieces shared with the dynamics.

/// Fourier coefficients of two real fields from one complex transform.
std::array<CArray, 2> fourier_pair(const RArray& a, const RArray& b);

/// Inverse transform of two Hermitian-symmetric spectra into real fields.
std::array<RArray, 2> physical_pair(const CArray& a_hat, const CArray& b_hat);

/// Spectra of (A_0, A_1, A_2) given spectra of (J^0, J^1, J^2).
std::array<CArray, 3> gauge_spectra(const Grid& g, const CArray& j0, const CArray& j1,
                                    const CArray& j2, double lambda);

/// Symbol 1 / (lambda^2 + kappa_1^2 + kappa_2^2) with derivative wavenumbers.
CArray screened_inverse_symbol(const Grid& g, double lambda);

/// Spectral partial derivative d_axis (axis 1 or 2) of a Fourier array.
CArray spectral_derivative(const Grid& g, const CArray& f_hat, int axis);

void write_gauge_snapshot(const std::string& path, const GaugeFields& a);

}  // namespace cspd
