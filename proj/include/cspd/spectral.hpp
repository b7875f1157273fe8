#pragma once

#include <cmath>
#include <concepts>
#include <vector>

#include <Eigen/Core>

#include "cspd/field.hpp"

namespace cspd {

enum class Sign : int { Plus = 1, Minus = -1 };

inline constexpr double value(Sign s) { return static_cast<double>(static_cast<int>(s)); }
inline constexpr Sign operator-(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
inline constexpr char to_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

using Matrix2c = Eigen::Matrix<cplx, 2, 2>;
using Vector2c = Eigen::Matrix<cplx, 2, 1>;

template <class S>
concept ScalarSymbol = requires(S s, const Vec2d& xi) {
  { s(xi) } -> std::convertible_to<cplx>;
};

template <class S>
concept MatrixSymbol = requires(S s, const Vec2d& xi) {
  { s(xi) } -> std::convertible_to<Matrix2c>;
};

/// Multiply every Fourier coefficient by symbol(xi). Matrix-valued symbols
/// only make sense for spinors; passing one with a scalar field does not
/// compile.
template <int C, ScalarSymbol Symbol>
Field<C> apply_multiplier(const Field<C>& f, Symbol&& symbol) {
  require_space(f.space, Space::Fourier, "apply_multiplier");
  Field<C> out = f;
  const Grid& g = f.grid;
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      const cplx m = symbol(g.xi(i, j));
      for (int c = 0; c < C; ++c) out[c](i, j) *= m;
    }
  return out;
}

template <MatrixSymbol Symbol>
SpinorField apply_multiplier(const SpinorField& f, Symbol&& symbol) {
  require_space(f.space, Space::Fourier, "apply_multiplier");
  SpinorField out = f;
  const Grid& g = f.grid;
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      const Matrix2c m = symbol(g.xi(i, j));
      const Vector2c v(f[0](i, j), f[1](i, j));
      const Vector2c w = m * v;
      out[0](i, j) = w(0);
      out[1](i, j) = w(1);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Littlewood-Paley pieces.

/// Radial C^infinity bump: 1 on r <= 1, 0 on r >= 2, exp(-1/x) transition.
inline double lp_mother(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  auto s = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double u = r - 1.0;
  return 1.0 - s(u) / (s(u) + s(1.0 - u));
}

/// Annulus cutoff rho_N(xi) = rho(|xi|/N) - rho(2|xi|/N), supported in [N/2, 2N].
inline double lp_annulus(double r, double N) { return lp_mother(r / N) - lp_mother(2.0 * r / N); }

/// Throws DomainError unless N is a power of two inside the grid's band.
void check_dyadic(const Grid& g, double N);

/// All powers of two inside the resolvable band, ascending.
std::vector<double> resolvable_dyadics(const Grid& g);

template <int C>
Field<C> lp_project(const Field<C>& f, double N) {
  check_dyadic(f.grid, N);
  return apply_multiplier(f, [N](const Vec2d& xi) { return cplx(lp_annulus(xi.norm(), N)); });
}

// ---------------------------------------------------------------------------

/// Half Klein-Gordon propagator e^{-theta i t <D>}.
template <int C>
Field<C> free_evolve(const Field<C>& f, double t, Sign theta) {
  const double s = value(theta) * t;
  return apply_multiplier(f, [s](const Vec2d& xi) { return std::polar(1.0, -s * japanese(xi)); });
}

/// Zero every mode with max(|m1|, |m2|) >= n/4. With inputs confined to the
/// kept block, cubic products computed pointwise alias only into the
/// discarded region.
template <int C>
void dealias_in_place(Field<C>& f) {
  const Grid& g = f.grid;
  const int cut = g.dealias_cutoff_index();
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      if (std::abs(g.signed_index(i)) >= cut || std::abs(g.signed_index(j)) >= cut)
        for (int c = 0; c < C; ++c) f[c](i, j) = 0.0;
}

template <int C>
Field<C> dealias(Field<C> f) {
  require_space(f.space, Space::Fourier, "dealias");
  dealias_in_place(f);
  return f;
}

}  // namespace cspd
