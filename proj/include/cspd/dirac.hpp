#pragma once

#include <complex>

#include <Eigen/Core>

#include "cspd/field.hpp"
#include "cspd/spectral.hpp"

namespace cspd {

template <class F>
using Mat2c = Eigen::Matrix<std::complex<F>, 2, 2>;

/// Gamma matrices of the (1+2)-dimensional representation and the derived
/// beta = gamma^0, alpha^j = gamma^0 gamma^j, alpha^0 = I.
template <class F>
struct DiracMatrices {
  using M = Mat2c<F>;
  using C = std::complex<F>;

  static M gamma0() { return (M() << C(1), C(0), C(0), C(-1)).finished(); }
  static M gamma1() { return (M() << C(0), C(1), C(-1), C(0)).finished(); }
  static M gamma2() { return (M() << C(0), C(0, -1), C(0, -1), C(0)).finished(); }

  static M beta() { return gamma0(); }
  static M alpha(int mu) {
    switch (mu) {
      case 0: return M::Identity();
      case 1: return gamma0() * gamma1();
      case 2: return gamma0() * gamma2();
      default: throw ParameterError("alpha: index must be 0, 1 or 2");
    }
  }
};

/// Pi_theta(xi) = (I + theta <xi>^{-1} (alpha.xi + beta)) / 2.
template <class F>
Mat2c<F> projection_symbol(const Vec2<F>& xi, Sign theta) {
  using C = std::complex<F>;
  const F s = F(value(theta)) / japanese(xi);
  // alpha.xi + beta = [[1, xi1 - i xi2], [xi1 + i xi2, -1]]
  Mat2c<F> m;
  m << C(F(1) + s), s * C(xi(0), -xi(1)), s * C(xi(0), xi(1)), C(F(1) - s);
  return F(0.5) * m;
}

/// Pi_theta(D) applied mode-wise to a Fourier-space spinor.
SpinorField project(const SpinorField& psi, Sign theta);

/// J^mu = <psi, alpha^mu psi> pointwise for a physical-space spinor.
RealField current(const SpinorField& psi, int mu);

/// Sesquilinear density <phi, alpha^mu chi> (conjugate-linear in phi),
/// complex-valued for distinct arguments.
ScalarField density(const SpinorField& phi, const SpinorField& chi, int mu);

/// Apply alpha^mu pointwise (works in either representation).
SpinorField apply_alpha(const SpinorField& psi, int mu);

}  // namespace cspd
