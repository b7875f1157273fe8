#include "cspd/dynamics.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "cspd/snapshot.hpp"

namespace cspd {
namespace {

const cplx I(0.0, 1.0);

SpinorField fourier_dealiased(SpinorField phys) {
  SpinorField hat = to_fourier(phys);
  dealias_in_place(hat);
  return hat;
}

/// Screened inverse (and optionally one derivative) of a complex density.
CArray screened(const Grid& g, const CArray& rho_hat, const CArray& h, int axis) {
  CArray out = h * rho_hat;
  if (axis != 0) out = spectral_derivative(g, out, axis);
  return fft_inverse(out);
}

void check_inputs(const SpinorField& psi, const SpinorField& phi, const SpinorField& chi) {
  psi.check_compatible(phi);
  psi.check_compatible(chi);
  require_space(psi.space, Space::Physical, "nonlinearity");
}

SpinorField combine(const SpinorField& psi, const CArray& c0, const CArray& c1, const CArray& c2) {
  // c0 psi + c1 alpha^1 psi + c2 alpha^2 psi
  SpinorField out(psi.grid, Space::Physical);
  out[0] = c0 * psi[0] + c1 * psi[1] - I * c2 * psi[1];
  out[1] = c0 * psi[1] + c1 * psi[0] + I * c2 * psi[0];
  return out;
}

}  // namespace

SpinorField gaussian_spinor(const Grid& g, const InitialData& init) {
  if (!(init.width > 0.0)) throw ParameterError("initial data: width must be positive");
  SpinorField psi(g, Space::Physical);
  const double w2 = init.width * init.width;
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      const Vec2d x = g.x(i, j);
      const cplx amp = init.epsilon * std::exp(-x.squaredNorm() / (2.0 * w2)) *
                       std::polar(1.0, x.dot(init.carrier));
      psi[0](i, j) = amp * init.direction(0);
      psi[1](i, j) = amp * init.direction(1);
    }
  return psi;
}

ProfileState make_initial_state(const Grid& g, const InitialData& init) {
  const SpinorField hat = dealias(to_fourier(gaussian_spinor(g, init)));
  return {cspd::project(hat, Sign::Plus), cspd::project(hat, Sign::Minus), 0.0};
}

// ---------------------------------------------------------------------------

SpinorField nonlinearity_n1(const SpinorField& psi, const SpinorField& phi, const SpinorField& chi,
                            double lambda) {
  check_inputs(psi, phi, chi);
  const Grid& g = psi.grid;
  const CArray h = screened_inverse_symbol(g, lambda);
  std::array<CArray, 3> c;
  for (int mu = 0; mu < 3; ++mu)
    c[static_cast<std::size_t>(mu)] = screened(g, fft_forward(density(phi, chi, mu)[0]), h, 0);
  SpinorField out = combine(psi, lambda * c[0], -lambda * c[1], -lambda * c[2]);
  return to_physical(fourier_dealiased(std::move(out)));
}

SpinorField nonlinearity_n2(const SpinorField& psi, const SpinorField& phi, const SpinorField& chi,
                            double lambda) {
  check_inputs(psi, phi, chi);
  const Grid& g = psi.grid;
  const CArray h = screened_inverse_symbol(g, lambda);
  const CArray r0 = fft_forward(density(phi, chi, 0)[0]);
  const CArray r1 = fft_forward(density(phi, chi, 1)[0]);
  const CArray r2 = fft_forward(density(phi, chi, 2)[0]);
  const CArray c0 = screened(g, r2, h, 1) - screened(g, r1, h, 2);
  const CArray c1 = screened(g, r0, h, 2);
  const CArray c2 = -screened(g, r0, h, 1);
  SpinorField out = combine(psi, c0, c1, c2);
  return to_physical(fourier_dealiased(std::move(out)));
}

SpinorField nonlinearity_gauge(const SpinorField& psi, double lambda) {
  require_space(psi.space, Space::Physical, "nonlinearity_gauge");
  const GaugeFields a =
      solve_static_gauge(current(psi, 0), current(psi, 1), current(psi, 2), lambda);
  SpinorField out = combine(psi, (-a.a0.values).cast<cplx>(), (-a.a1.values).cast<cplx>(),
                            (-a.a2.values).cast<cplx>());
  return to_physical(fourier_dealiased(std::move(out)));
}

// ---------------------------------------------------------------------------

ProfileSystem::ProfileSystem(const Grid& g, double lambda, bool nonlinear)
    : grid_(g), lambda_(lambda), nonlinear_(nonlinear) {
  if (!(lambda > 0.0)) throw ParameterError("ProfileSystem: lambda must be positive");
  const int n = g.n();
  const int cut = g.dealias_cutoff_index();
  bracket_.resize(n, n);
  p00_.resize(n, n);
  p01_.resize(n, n);
  p11_.resize(n, n);
  k1_.resize(n, n);
  k2_.resize(n, n);
  keep_.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vec2d xi = g.xi(i, j);
      bracket_(i, j) = japanese(xi);
      const Matrix2c p = projection_symbol(xi, Sign::Plus);
      p00_(i, j) = p(0, 0);
      p01_(i, j) = p(0, 1);
      p11_(i, j) = p(1, 1);
      k1_(i, j) = g.derivative_wavenumber(i);
      k2_(i, j) = g.derivative_wavenumber(j);
      keep_(i, j) =
          std::abs(g.signed_index(i)) < cut && std::abs(g.signed_index(j)) < cut ? 1.0 : 0.0;
    }
  screen_ = 1.0 / (lambda * lambda + k1_.square() + k2_.square());
}

CArray ProfileSystem::phase(double t) const {
  CArray e(grid_.n(), grid_.n());
  const double* b = bracket_.data();
  cplx* out = e.data();
  for (Eigen::Index i = 0; i < e.size(); ++i) out[i] = std::polar(1.0, -t * b[i]);
  return e;
}

SpinorField ProfileSystem::project(const SpinorField& f, Sign theta) const {
  require_space(f.space, Space::Fourier, "ProfileSystem::project");
  SpinorField out(grid_, Space::Fourier);
  const CArray u = p00_ * f[0] + p01_ * f[1];
  const CArray v = p01_.conjugate() * f[0] + p11_ * f[1];
  if (theta == Sign::Plus) {
    out[0] = u;
    out[1] = v;
  } else {
    out[0] = f[0] - u;
    out[1] = f[1] - v;
  }
  return out;
}

SpinorField ProfileSystem::component(const ProfileState& s, Sign theta) const {
  const CArray e = phase(value(theta) * s.t);
  SpinorField out = s.profile(theta);
  for (int c = 0; c < 2; ++c) out[c] *= e;
  return out;
}

SpinorField ProfileSystem::synthesize(const ProfileState& s) const {
  const CArray e = phase(s.t);
  SpinorField out(grid_, Space::Fourier);
  for (int c = 0; c < 2; ++c) out[c] = e * s.f_plus[c] + e.conjugate() * s.f_minus[c];
  return out;
}

SpinorField ProfileSystem::nonlinearity_hat(const SpinorField& psi) const {
  require_space(psi.space, Space::Physical, "nonlinearity_hat");
  require_same_grid(psi.grid, grid_, "nonlinearity_hat");
  const RArray j0 = psi[0].abs2() + psi[1].abs2();
  const CArray cross = psi[0].conjugate() * psi[1];
  const RArray j1 = 2.0 * cross.real();
  const RArray j2 = 2.0 * cross.imag();

  const auto [h0, h1] = fourier_pair(j0, j1);
  const CArray h2 = fft_forward(j2.cast<cplx>());
  // Same formulas as gauge_spectra, on cached tables.
  const double lam = lambda_;
  const CArray a0h = screen_ * (-lam * h0 + I * (k2_ * h1 - k1_ * h2));
  const CArray a1h = screen_ * (lam * h1 - I * k2_ * h0);
  const CArray a2h = screen_ * (lam * h2 + I * k1_ * h0);
  const auto [a0, a1] = physical_pair(a0h, a1h);
  const RArray a2 = fft_inverse(a2h).real();

  SpinorField out(grid_, Space::Physical);
  out[0] = -(a0 * psi[0] + a1 * psi[1] - I * a2 * psi[1]);
  out[1] = -(a0 * psi[1] + a1 * psi[0] + I * a2 * psi[0]);
  SpinorField hat = to_fourier(out);
  for (int c = 0; c < 2; ++c) hat[c] *= keep_;
  return hat;
}

std::pair<SpinorField, SpinorField> ProfileSystem::rhs_at(const SpinorField& f_plus,
                                                         const SpinorField& f_minus,
                                                         const CArray& e) const {
  if (!nonlinear_)
    return {SpinorField(grid_, Space::Fourier), SpinorField(grid_, Space::Fourier)};
  SpinorField psi_hat(grid_, Space::Fourier);
  for (int c = 0; c < 2; ++c) psi_hat[c] = e * f_plus[c] + e.conjugate() * f_minus[c];

  const SpinorField n_hat = nonlinearity_hat(to_physical(psi_hat));
  // d/dt f_+ = e^{+i t <xi>} Pi_+ (i N), d/dt f_- = e^{-i t <xi>} Pi_- (i N)
  const CArray u = I * (p00_ * n_hat[0] + p01_ * n_hat[1]);
  const CArray v = I * (p01_.conjugate() * n_hat[0] + p11_ * n_hat[1]);
  SpinorField dp(grid_, Space::Fourier), dm(grid_, Space::Fourier);
  dp[0] = e.conjugate() * u;
  dp[1] = e.conjugate() * v;
  dm[0] = e * (I * n_hat[0] - u);
  dm[1] = e * (I * n_hat[1] - v);
  return {std::move(dp), std::move(dm)};
}

std::pair<SpinorField, SpinorField> ProfileSystem::rhs(const ProfileState& s) const {
  s.f_plus.check_compatible(s.f_minus);
  require_space(s.f_plus.space, Space::Fourier, "rhs");
  return rhs_at(s.f_plus, s.f_minus, phase(s.t));
}

ProfileState ProfileSystem::step_rk4(const ProfileState& s, double dt) const {
  if (dt == 0.0 || !std::isfinite(dt)) throw ParameterError("step_rk4: dt must be nonzero");
  require_space(s.f_plus.space, Space::Fourier, "step_rk4");
  using Pair = std::pair<SpinorField, SpinorField>;
  auto check = [](const Pair& k, int stage, double t) {
    if (!k.first.all_finite() || !k.second.all_finite()) throw DivergenceError(stage, t);
  };
  auto stage_state = [&](const Pair& k, double h) {
    Pair out{SpinorField(grid_, Space::Fourier), SpinorField(grid_, Space::Fourier)};
    for (int c = 0; c < 2; ++c) {
      out.first[c] = s.f_plus[c] + h * k.first[c];
      out.second[c] = s.f_minus[c] + h * k.second[c];
    }
    return out;
  };

  const CArray e0 = phase(s.t), eh = phase(s.t + 0.5 * dt), e1 = phase(s.t + dt);
  const Pair k1 = rhs_at(s.f_plus, s.f_minus, e0);
  check(k1, 1, s.t);
  Pair y = stage_state(k1, 0.5 * dt);
  const Pair k2 = rhs_at(y.first, y.second, eh);
  check(k2, 2, s.t + 0.5 * dt);
  y = stage_state(k2, 0.5 * dt);
  const Pair k3 = rhs_at(y.first, y.second, eh);
  check(k3, 3, s.t + 0.5 * dt);
  y = stage_state(k3, dt);
  const Pair k4 = rhs_at(y.first, y.second, e1);
  check(k4, 4, s.t + dt);

  ProfileState out = s;
  const double w = dt / 6.0;
  for (int c = 0; c < 2; ++c) {
    out.f_plus[c] += w * (k1.first[c] + 2.0 * k2.first[c] + 2.0 * k3.first[c] + k4.first[c]);
    out.f_minus[c] += w * (k1.second[c] + 2.0 * k2.second[c] + 2.0 * k3.second[c] + k4.second[c]);
  }
  out.t = s.t + dt;
  if (!out.f_plus.all_finite() || !out.f_minus.all_finite()) throw DivergenceError(4, out.t);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const std::string& s) {
  return prefix.string() + s;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& prefix, const ProfileState& s,
                      const CheckpointMeta& meta) {
  write_snapshot(with_suffix(prefix, "_fplus.cspd"), s.f_plus);
  write_snapshot(with_suffix(prefix, "_fminus.cspd"), s.f_minus);
  nlohmann::json j;
  j["t"] = meta.t;
  j["dt"] = meta.dt;
  j["lambda"] = meta.lambda;
  j["epsilon"] = meta.init.epsilon;
  j["width"] = meta.init.width;
  j["k0"] = {meta.init.carrier(0), meta.init.carrier(1)};
  j["v"] = {{meta.init.direction(0).real(), meta.init.direction(0).imag()},
            {meta.init.direction(1).real(), meta.init.direction(1).imag()}};
  j["L"] = meta.box_length;
  j["n"] = meta.n;
  std::ofstream os(with_suffix(prefix, "_meta.json"));
  os << j.dump(2) << "\n";
  if (!os) throw FormatError("checkpoint: cannot write metadata");
}

std::pair<ProfileState, CheckpointMeta> read_checkpoint(const std::filesystem::path& prefix) {
  std::ifstream is(with_suffix(prefix, "_meta.json"));
  if (!is) throw FormatError("checkpoint: missing metadata for " + prefix.string());
  const auto j = nlohmann::json::parse(is);
  CheckpointMeta m;
  m.t = j.at("t");
  m.dt = j.at("dt");
  m.lambda = j.at("lambda");
  m.init.epsilon = j.at("epsilon");
  m.init.width = j.at("width");
  m.init.carrier = Vec2d(j.at("k0")[0], j.at("k0")[1]);
  m.init.direction = Vector2c(cplx(j.at("v")[0][0], j.at("v")[0][1]),
                              cplx(j.at("v")[1][0], j.at("v")[1][1]));
  m.box_length = j.at("L");
  m.n = j.at("n");

  ProfileState s;
  s.f_plus = field_from_snapshot<2>(read_snapshot(with_suffix(prefix, "_fplus.cspd")));
  s.f_minus = field_from_snapshot<2>(read_snapshot(with_suffix(prefix, "_fminus.cspd")));
  s.t = m.t;
  if (!(s.f_plus.grid == Grid(m.n, m.box_length)) || !(s.f_minus.grid == s.f_plus.grid))
    throw FormatError("checkpoint: snapshot grid disagrees with metadata");
  return {std::move(s), m};
}

}  // namespace cspd
