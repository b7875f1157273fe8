#include "cspd/gauge.hpp"

#include <cmath>

#include "cspd/snapshot.hpp"

namespace cspd {
namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ParameterError("gauge: Proca coupling lambda must be positive");
}

}  // namespace

std::array<CArray, 2> fourier_pair(const RArray& a, const RArray& b) {
  const auto n = a.rows();
  CArray z(n, n);
  z.real() = a;
  z.imag() = b;
  const CArray zh = fft_forward(z);
  CArray ah(n, n), bh(n, n);
  const cplx half_i(0.0, 0.5);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index mi = (n - i) % n;
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx zk = zh(i, j);
      const cplx zm = std::conj(zh(mi, (n - j) % n));
      ah(i, j) = 0.5 * (zk + zm);
      bh(i, j) = -half_i * (zk - zm);
    }
  }
  return {std::move(ah), std::move(bh)};
}

std::array<RArray, 2> physical_pair(const CArray& a_hat, const CArray& b_hat) {
  const CArray z = fft_inverse(a_hat + cplx(0.0, 1.0) * b_hat);
  return {z.real(), z.imag()};
}

CArray screened_inverse_symbol(const Grid& g, double lambda) {
  const int n = g.n();
  CArray h(n, n);
  for (int i = 0; i < n; ++i) {
    const double k1 = g.derivative_wavenumber(i);
    for (int j = 0; j < n; ++j) {
      const double k2 = g.derivative_wavenumber(j);
      h(i, j) = 1.0 / (lambda * lambda + k1 * k1 + k2 * k2);
    }
  }
  return h;
}

CArray spectral_derivative(const Grid& g, const CArray& f_hat, int axis) {
  const int n = g.n();
  CArray out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double k = axis == 1 ? g.derivative_wavenumber(i) : g.derivative_wavenumber(j);
      out(i, j) = cplx(0.0, k) * f_hat(i, j);
    }
  return out;
}

std::array<CArray, 3> gauge_spectra(const Grid& g, const CArray& j0, const CArray& j1,
                                    const CArray& j2, double lambda) {
  check_lambda(lambda);
  const int n = g.n();
  CArray a0(n, n), a1(n, n), a2(n, n);
  for (int i = 0; i < n; ++i) {
    const double k1 = g.derivative_wavenumber(i);
    for (int j = 0; j < n; ++j) {
      const double k2 = g.derivative_wavenumber(j);
      const double h = 1.0 / (lambda * lambda + k1 * k1 + k2 * k2);
      const cplx ik1(0.0, k1), ik2(0.0, k2);
      a1(i, j) = h * (lambda * j1(i, j) - ik2 * j0(i, j));
      a2(i, j) = h * (lambda * j2(i, j) + ik1 * j0(i, j));
      a0(i, j) = h * (-lambda * j0(i, j) + ik2 * j1(i, j) - ik1 * j2(i, j));
    }
  }
  return {std::move(a0), std::move(a1), std::move(a2)};
}

GaugeFields solve_static_gauge(const RealField& j0, const RealField& j1, const RealField& j2,
                               double lambda) {
  check_lambda(lambda);
  require_same_grid(j0.grid, j1.grid, "solve_static_gauge");
  require_same_grid(j0.grid, j2.grid, "solve_static_gauge");
  const Grid& g = j0.grid;
  auto [h0, h1] = fourier_pair(j0.values, j1.values);
  const CArray h2 = fft_forward(j2.values.cast<cplx>());
  auto a = gauge_spectra(g, h0, h1, h2, lambda);
  auto [p0, p1] = physical_pair(a[0], a[1]);
  RArray p2 = fft_inverse(a[2]).real();
  return {RealField(g, std::move(p0)), RealField(g, std::move(p1)), RealField(g, std::move(p2)),
          lambda};
}

GaugeResidual gauge_residual(const GaugeFields& a, const RealField& j0, const RealField& j1,
                             const RealField& j2) {
  const Grid& g = a.a0.grid;
  for (const auto* f : {&a.a1, &a.a2, &j0, &j1, &j2}) require_same_grid(g, f->grid, "gauge_residual");
  const double lam = a.lambda;

  auto hat = [](const RealField& f) { return fft_forward(f.values.cast<cplx>()); };
  const CArray A0 = hat(a.a0), A1 = hat(a.a1), A2 = hat(a.a2);
  const CArray J0 = hat(j0), J1 = hat(j1), J2 = hat(j2);
  const double L = g.length();
  auto norm = [L](const CArray& r) { return L * std::sqrt(r.abs2().sum()); };

  GaugeResidual r;
  r.curl1 = norm(spectral_derivative(g, A0, 1) + lam * A2 - J2);
  r.curl2 = norm(spectral_derivative(g, A0, 2) - lam * A1 + J1);
  r.charge = norm(spectral_derivative(g, A2, 1) - spectral_derivative(g, A1, 2) + lam * A0 + J0);
  r.divergence = norm(spectral_derivative(g, A1, 1) + spectral_derivative(g, A2, 2));
  return r;
}

void write_gauge_snapshot(const std::string& path, const GaugeFields& a) {
  Snapshot s{a.a0.grid, Space::Physical, {}};
  for (const auto* f : {&a.a0, &a.a1, &a.a2}) s.components.push_back(f->values.cast<cplx>());
  write_snapshot(path, s);
}

}  // namespace cspd
