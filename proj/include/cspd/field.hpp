#pragma once

#include <array>
#include <complex>
#include <cstdint>

#include <Eigen/Core>

#include "cspd/grid.hpp"

namespace cspd {

using cplx = std::complex<double>;
using CArray = Eigen::Array<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Space : std::uint8_t { Physical = 0, Fourier = 1 };

inline const char* to_string(Space s) { return s == Space::Physical ? "physical" : "Fourier"; }

/// Complex field with C components on a periodic grid, tagged with the
/// representation it is stored in. Values are plain Eigen arrays indexed
/// (i, j) <-> (x1, x2) in FFT order.
template <int C>
struct Field {
  static constexpr int components = C;

  Grid grid;
  Space space = Space::Physical;
  std::array<CArray, C> comp;

  Field() = default;
  Field(const Grid& g, Space s) : grid(g), space(s) {
    for (auto& c : comp) c = CArray::Zero(g.n(), g.n());
  }

  static Field zeros(const Grid& g, Space s) { return Field(g, s); }

  CArray& operator[](int c) { return comp[static_cast<std::size_t>(c)]; }
  const CArray& operator[](int c) const { return comp[static_cast<std::size_t>(c)]; }

  Field& operator+=(const Field& o) {
    check_compatible(o);
    for (int c = 0; c < C; ++c) (*this)[c] += o[c];
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_compatible(o);
    for (int c = 0; c < C; ++c) (*this)[c] -= o[c];
    return *this;
  }
  Field& operator*=(cplx a) {
    for (auto& c : comp) c *= a;
    return *this;
  }

  void check_compatible(const Field& o) const {
    require_same_grid(grid, o.grid, "field arithmetic");
    if (space != o.space) throw RepresentationError("field arithmetic: representation mismatch");
  }

  bool all_finite() const {
    for (const auto& c : comp)
      if (!c.real().allFinite() || !c.imag().allFinite()) return false;
    return true;
  }
};

using ScalarField = Field<1>;
using SpinorField = Field<2>;

template <int C>
Field<C> operator+(Field<C> a, const Field<C>& b) { return a += b; }
template <int C>
Field<C> operator-(Field<C> a, const Field<C>& b) { return a -= b; }
template <int C>
Field<C> operator*(cplx s, Field<C> a) { return a *= s; }
template <int C>
Field<C> operator*(Field<C> a, cplx s) { return a *= s; }

/// Real scalar field, always in physical space.
struct RealField {
  Grid grid;
  RArray values;

  RealField() = default;
  explicit RealField(const Grid& g) : grid(g), values(RArray::Zero(g.n(), g.n())) {}
  RealField(const Grid& g, RArray v) : grid(g), values(std::move(v)) {}
};

inline void require_space(Space actual, Space expected, const char* what) {
  if (actual != expected)
    throw RepresentationError(std::string(what) + ": expected " + to_string(expected) +
                              "-space input, got " + to_string(actual));
}

// ---------------------------------------------------------------------------
// Transforms. Forward carries 1/n^2, so a coefficient c_k approximates
// (1/L^2) * (continuum Fourier transform at k) and the inverse is a plain sum.

CArray fft_forward(const CArray& a);
CArray fft_inverse(const CArray& a);

template <int C>
Field<C> to_fourier(const Field<C>& f) {
  require_space(f.space, Space::Physical, "to_fourier");
  Field<C> out;
  out.grid = f.grid;
  out.space = Space::Fourier;
  for (int c = 0; c < C; ++c) out[c] = fft_forward(f[c]);
  return out;
}

template <int C>
Field<C> to_physical(const Field<C>& f) {
  require_space(f.space, Space::Fourier, "to_physical");
  Field<C> out;
  out.grid = f.grid;
  out.space = Space::Physical;
  for (int c = 0; c < C; ++c) out[c] = fft_inverse(f[c]);
  return out;
}

inline ScalarField complexify(const RealField& r) {
  ScalarField s(r.grid, Space::Physical);
  s[0] = r.values.cast<cplx>();
  return s;
}

// ---------------------------------------------------------------------------
// Norms under the Parseval normalization:
//   ||f||^2 = h^2 sum_x |f(x)|^2 = L^2 sum_k |c_k|^2.

template <int C>
double squared_l2_norm(const Field<C>& f) {
  double s = 0.0;
  for (int c = 0; c < C; ++c) s += f[c].abs2().sum();
  const double w = f.space == Space::Physical ? f.grid.spacing() * f.grid.spacing()
                                              : f.grid.length() * f.grid.length();
  return w * s;
}

template <int C>
double l2_norm(const Field<C>& f) {
  return std::sqrt(squared_l2_norm(f));
}

inline double l2_norm(const RealField& f) {
  return std::sqrt(f.values.square().sum()) * f.grid.spacing();
}

/// L^2 inner product <a, b>, conjugate-linear in a.
template <int C>
cplx inner_product(const Field<C>& a, const Field<C>& b) {
  a.check_compatible(b);
  cplx s = 0.0;
  for (int c = 0; c < C; ++c) s += (a[c].conjugate() * b[c]).sum();
  const double w = a.space == Space::Physical ? a.grid.spacing() * a.grid.spacing()
                                              : a.grid.length() * a.grid.length();
  return w * s;
}

}  // namespace cspd
