#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cspd/dynamics.hpp"
#include "cspd/field.hpp"

namespace cspd {

/// ||<D>^s f||_{L^2} of a Fourier-space field.
template <int C>
double sobolev_norm(const Field<C>& f, double s) {
  require_space(f.space, Space::Fourier, "sobolev_norm");
  const Grid& g = f.grid;
  double acc = 0.0;
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      const double w = std::pow(japanese(g.xi(i, j)), 2.0 * s);
      for (int c = 0; c < C; ++c) acc += w * std::norm(f[c](i, j));
    }
  return g.length() * std::sqrt(acc);
}

/// sqrt(||f||_{H^s}^2 + sum_j ||x_j f||_{H^s}^2) with x_j the centred
/// sawtooth coordinate of the torus.
double weighted_profile_norm(const SpinorField& f_hat, double s);

/// max_x |(<D>^k psi)(x)| for a Fourier-space spinor.
double sup_norm_w(const SpinorField& psi_hat, int k);

/// ||P_N <psi_theta, alpha^mu psi_theta>||_{L^2}.
double bilinear_dyadic_norm(const SpinorField& psi_theta_hat, int mu, double N);

/// ||P_N d_t f_theta||_{L^2}, evaluated through the profile right-hand side.
double profile_time_derivative_norm(const ProfileSystem& sys, const ProfileState& s, double N,
                                    Sign theta);

/// Weighted H^5 norm of f(t2) - f(t1).
double scattering_increment(const SpinorField& f_t1, const SpinorField& f_t2);

/// Time up to which a Gaussian of width w centred in a box of side L stays
/// clear of the periodic images: L/2 - 4w (group speed is below one).
double wraparound_horizon(double box_length, double width);

// ---------------------------------------------------------------------------

struct DecayFit {
  double t_a = 0.0, t_b = 0.0;
  double exponent = 0.0;   ///< p in value ~ C t^p
  double amplitude = 0.0;  ///< C
  double residual = 0.0;   ///< rms of log-residuals
  int samples = 0;
};

inline constexpr int kMinFitSamples = 8;

/// Least-squares slope of log(value) against log(t) over [t_a, t_b].
DecayFit fit_decay_exponent(std::span<const double> t, std::span<const double> value, double t_a,
                            double t_b);

/// Behaviour of a weighted series E(t) over a window. growth is the largest
/// ratio E(t) / E(s) with s <= t, so growth <= c means E never climbs by more
/// than a factor c above any earlier value.
struct Envelope {
  double first = 0.0;
  double highest = 0.0;  ///< run constant
  double lowest = 0.0;
  double growth = 1.0;
  int samples = 0;
};

Envelope envelope(std::span<const double> t, std::span<const double> e, double t_a, double t_b);

// ---------------------------------------------------------------------------

struct DiagnosticsConfig {
  std::vector<double> tracked_N{0.25, 1.0, 4.0};
  std::vector<int> tracked_k{0, 1, 2, 3, 4, 5, 6, 7};
  double high_s = 10.0;
  double weighted_s = 5.0;
  double horizon = 0.0;
};

/// One time sample of every measured quantity.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;  ///< ||psi||_{L^2}^2
  double h0 = 0.0, h5 = 0.0, h_high = 0.0;
  double weighted_plus = 0.0, weighted_minus = 0.0;
  std::vector<double> sup;  ///< per tracked k
  /// bilinear[theta][mu][N index], theta index 0 = +, 1 = -
  std::vector<double> bilinear;
  /// time_derivative[theta][N index]
  std::vector<double> time_derivative;
  GaugeResidual gauge;
  bool past_horizon = false;
};

class DiagnosticsSampler {
 public:
  DiagnosticsSampler(const ProfileSystem& sys, DiagnosticsConfig cfg);

  DiagnosticsRecord measure(const ProfileState& s) const;

  const DiagnosticsConfig& config() const { return cfg_; }

  std::vector<std::string> column_names() const;
  void write_header(std::ostream& os) const;
  void write_row(std::ostream& os, const DiagnosticsRecord& r) const;

  std::size_t bilinear_index(Sign theta, int mu, std::size_t n_index) const;
  std::size_t time_derivative_index(Sign theta, std::size_t n_index) const;

 private:
  const ProfileSystem& sys_;
  DiagnosticsConfig cfg_;
};

/// Compact textual form of a dyadic number for column names: 0.25, 1, 4.
std::string format_dyadic(double N);

}  // namespace cspd
