#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "cspd/errors.hpp"

namespace cspd {

template <class F>
using Vec2 = Eigen::Matrix<F, 2, 1>;
using Vec2d = Vec2<double>;

/// Japanese bracket <xi> = sqrt(1 + |xi|^2) (unit mass).
template <class F>
inline F japanese(const Vec2<F>& xi) {
  using std::sqrt;
  return sqrt(F(1) + xi.squaredNorm());
}

template <class F>
inline F japanese(F r) {
  using std::sqrt;
  return sqrt(F(1) + r * r);
}

/// Square periodic grid on [-L/2, L/2)^2 with n points per axis.
///
/// Both physical samples and Fourier coefficients are stored in FFT order:
/// index i maps to the signed integer m = i for i < n/2 and m = i - n
/// otherwise, so position x = m * h and wavenumber k = m * dk. With this
/// ordering the discrete transform is centred on x = 0 and plane waves
/// e^{i k.x} land on a single coefficient with no extra phase.
class Grid {
 public:
  Grid() = default;
  Grid(int n, double box_length) : n_(n), length_(box_length) {
    if (n < 4 || n % 2 != 0) throw ParameterError("grid: n must be an even integer >= 4");
    if (!(box_length > 0.0) || !std::isfinite(box_length))
      throw ParameterError("grid: box length must be positive and finite");
  }

  int n() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / n_; }
  double mode_spacing() const { return 2.0 * std::numbers::pi / length_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }

  int signed_index(int i) const { return i < n_ / 2 ? i : i - n_; }
  double position(int i) const { return signed_index(i) * spacing(); }
  double wavenumber(int i) const { return signed_index(i) * mode_spacing(); }

  /// Wavenumber used for odd-order derivative symbols. The Nyquist index has
  /// no partner mode, so i*k there would break Hermitian symmetry of real
  /// fields; it is set to zero.
  double derivative_wavenumber(int i) const {
    return i == n_ / 2 ? 0.0 : wavenumber(i);
  }

  Vec2d xi(int i, int j) const { return {wavenumber(i), wavenumber(j)}; }
  Vec2d x(int i, int j) const { return {position(i), position(j)}; }

  /// Largest |k| retained by the cubic dealiasing rule.
  int dealias_cutoff_index() const { return n_ / 4; }

  /// Dyadic frequencies N are accepted in [dk, n*dk/2].
  double band_low() const { return mode_spacing(); }
  double band_high() const { return 0.5 * n_ * mode_spacing(); }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  int n_ = 0;
  double length_ = 0.0;
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw GridMismatch(std::string(what) + ": fields live on different grids");
}

}  // namespace cspd
