#pragma once

#include <random>

#include "cspd/dirac.hpp"
#include "cspd/dynamics.hpp"
#include "cspd/field.hpp"
#include "cspd/spectral.hpp"

namespace testing {

using namespace cspd;

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline double uniform(double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng());
}

inline cplx random_cplx() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

inline Vec2d random_vec(double r) { return {uniform(-r, r), uniform(-r, r)}; }

/// Random physical-space field (white noise in every component).
template <int C>
Field<C> random_field(const Grid& g) {
  Field<C> f(g, Space::Physical);
  for (int c = 0; c < C; ++c)
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j) f[c](i, j) = random_cplx();
  return f;
}

/// Random smooth spinor: Fourier coefficients with Gaussian decay, confined
/// to the dealiased block, returned in physical space.
inline SpinorField random_smooth_spinor(const Grid& g, double scale = 1.0, double decay = 0.5) {
  SpinorField h(g, Space::Fourier);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j)
        h[c](i, j) = scale * random_cplx() * std::exp(-decay * g.xi(i, j).squaredNorm());
  dealias_in_place(h);
  return to_physical(h);
}

inline RealField random_real(const Grid& g) {
  RealField r(g);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) r.values(i, j) = uniform(-1.0, 1.0);
  return r;
}

/// Plane wave amp * e^{i k.x} * v on grid mode (m1, m2), physical space.
inline SpinorField plane_wave(const Grid& g, int m1, int m2, const Vector2c& v, cplx amp = 1.0) {
  SpinorField f(g, Space::Physical);
  const double dk = g.mode_spacing();
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      const cplx e = amp * std::polar(1.0, dk * (m1 * g.position(i) + m2 * g.position(j)));
      f[0](i, j) = e * v(0);
      f[1](i, j) = e * v(1);
    }
  return f;
}

inline int fft_index(const Grid& g, int m) { return m >= 0 ? m : m + g.n(); }

template <int C>
double max_abs_diff(const Field<C>& a, const Field<C>& b) {
  double m = 0.0;
  for (int c = 0; c < C; ++c) m = std::max(m, (a[c] - b[c]).abs().maxCoeff());
  return m;
}

template <int C>
double max_abs(const Field<C>& a) {
  double m = 0.0;
  for (int c = 0; c < C; ++c) m = std::max(m, a[c].abs().maxCoeff());
  return m;
}

}  // namespace testing
