#include "cspd/dirac.hpp"

namespace cspd {

SpinorField project(const SpinorField& psi, Sign theta) {
  require_space(psi.space, Space::Fourier, "project");
  return apply_multiplier(psi, [theta](const Vec2d& xi) { return projection_symbol(xi, theta); });
}

ScalarField density(const SpinorField& phi, const SpinorField& chi, int mu) {
  phi.check_compatible(chi);
  require_space(phi.space, Space::Physical, "density");
  ScalarField out(phi.grid, Space::Physical);
  const cplx I(0.0, 1.0);
  switch (mu) {
    case 0:
      out[0] = phi[0].conjugate() * chi[0] + phi[1].conjugate() * chi[1];
      break;
    case 1:
      out[0] = phi[0].conjugate() * chi[1] + phi[1].conjugate() * chi[0];
      break;
    case 2:
      out[0] = -I * phi[0].conjugate() * chi[1] + I * phi[1].conjugate() * chi[0];
      break;
    default:
      throw ParameterError("density: mu must be 0, 1 or 2");
  }
  return out;
}

RealField current(const SpinorField& psi, int mu) {
  require_space(psi.space, Space::Physical, "current");
  RealField j(psi.grid);
  switch (mu) {
    case 0:
      j.values = psi[0].abs2() + psi[1].abs2();
      break;
    case 1:
      j.values = 2.0 * (psi[0].conjugate() * psi[1]).real();
      break;
    case 2:
      j.values = 2.0 * (psi[0].conjugate() * psi[1]).imag();
      break;
    default:
      throw ParameterError("current: mu must be 0, 1 or 2");
  }
  return j;
}

SpinorField apply_alpha(const SpinorField& psi, int mu) {
  SpinorField out = psi;
  const cplx I(0.0, 1.0);
  switch (mu) {
    case 0:
      break;
    case 1:
      out[0] = psi[1];
      out[1] = psi[0];
      break;
    case 2:
      out[0] = -I * psi[1];
      out[1] = I * psi[0];
      break;
    default:
      throw ParameterError("apply_alpha: mu must be 0, 1 or 2");
  }
  return out;
}

}  // namespace cspd
