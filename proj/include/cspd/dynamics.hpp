#pragma once

#include <filesystem>
#include <utility>

#include "cspd/dirac.hpp"
#include "cspd/field.hpp"
#include "cspd/gauge.hpp"
#include "cspd/spectral.hpp"

namespace cspd {

/// Interaction-picture unknowns f_theta = e^{theta i t <D>} psi_theta, stored
/// in Fourier space, plus the current time.
struct ProfileState {
  SpinorField f_plus;
  SpinorField f_minus;
  double t = 0.0;

  const SpinorField& profile(Sign s) const { return s == Sign::Plus ? f_plus : f_minus; }
  SpinorField& profile(Sign s) { return s == Sign::Plus ? f_plus : f_minus; }
  const Grid& grid() const { return f_plus.grid; }
};

/// Modulated Gaussian eps * exp(-|x|^2 / (2 w^2)) * e^{i x.k0} * v.
struct InitialData {
  double epsilon = 0.01;
  double width = 2.0;
  Vec2d carrier = Vec2d::Zero();
  Vector2c direction = Vector2c(1.0, 0.0);
};

SpinorField gaussian_spinor(const Grid& g, const InitialData& init);

/// Dealiased initial spinor split into its two projections; at t = 0 the
/// profiles coincide with psi_theta.
ProfileState make_initial_state(const Grid& g, const InitialData& init);

// ---------------------------------------------------------------------------
// Cubic nonlinearities on physical-space spinors. Outputs are dealiased and
// returned in physical space. (lambda^2 - Delta)^{-1} replaces (1 - Delta)^{-1}
// and the non-derivative terms carry a factor lambda, matching the static
// gauge reconstruction for general lambda.

SpinorField nonlinearity_n1(const SpinorField& psi, const SpinorField& phi, const SpinorField& chi,
                            double lambda = 1.0);
SpinorField nonlinearity_n2(const SpinorField& psi, const SpinorField& phi, const SpinorField& chi,
                            double lambda = 1.0);

/// -(A_0 + A_1 alpha^1 + A_2 alpha^2) psi with A from solve_static_gauge on the
/// currents of psi; equal to N1(psi,psi,psi) + N2(psi,psi,psi).
SpinorField nonlinearity_gauge(const SpinorField& psi, double lambda = 1.0);

/// Diagonalized profile system on one grid. Tables of <xi>, Pi_+(xi) and the
/// screened inverse symbol are built once.
class ProfileSystem {
 public:
  ProfileSystem(const Grid& g, double lambda = 1.0, bool nonlinear = true);

  const Grid& grid() const { return grid_; }
  double lambda() const { return lambda_; }
  bool nonlinear() const { return nonlinear_; }

  /// psi(t) = sum_theta e^{-theta i t <D>} f_theta, Fourier space.
  SpinorField synthesize(const ProfileState& s) const;
  /// psi_theta(t) = e^{-theta i t <D>} f_theta, Fourier space.
  SpinorField component(const ProfileState& s, Sign theta) const;

  /// Fourier-space, dealiased N1 + N2 for a physical-space psi, assembled
  /// through the gauge-coupled form.
  SpinorField nonlinearity_hat(const SpinorField& psi_phys) const;

  /// Time derivatives of (f_+, f_-).
  std::pair<SpinorField, SpinorField> rhs(const ProfileState& s) const;

  /// Classical four-stage Runge-Kutta on the profiles. dt may be negative
  /// (time reversal); it must be nonzero and finite. Throws DivergenceError
  /// naming the stage if non-finite values appear.
  ProfileState step_rk4(const ProfileState& s, double dt) const;

  /// Apply Pi_theta using the cached tables.
  SpinorField project(const SpinorField& f_hat, Sign theta) const;

 private:
  CArray phase(double t) const;  // e^{-i t <xi>}
  /// Right-hand side with e = e^{-i t <xi>} supplied by the caller, so the
  /// Runge-Kutta stages sharing a time share one table.
  std::pair<SpinorField, SpinorField> rhs_at(const SpinorField& f_plus,
                                             const SpinorField& f_minus, const CArray& e) const;

  Grid grid_;
  double lambda_;
  bool nonlinear_;
  RArray bracket_;          // <xi>
  CArray p00_, p01_, p11_;  // Pi_+ entries; p10 = conj(p01)
  RArray k1_, k2_;          // derivative wavenumbers
  RArray screen_;           // 1 / (lambda^2 + k1^2 + k2^2)
  RArray keep_;             // dealiasing mask, 0 or 1
};

// ---------------------------------------------------------------------------
// Checkpoints: two spinor snapshots plus a JSON metadata record.

struct CheckpointMeta {
  double t = 0.0;
  double dt = 0.0;
  double lambda = 1.0;
  InitialData init;
  double box_length = 0.0;
  int n = 0;
};

void write_checkpoint(const std::filesystem::path& prefix, const ProfileState& s,
                      const CheckpointMeta& meta);
std::pair<ProfileState, CheckpointMeta> read_checkpoint(const std::filesystem::path& prefix);

}  // namespace cspd
