#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cspd/dirac.hpp"
#include "cspd/grid.hpp"
#include "cspd/spectral.hpp"

namespace cspd {

/// Theta = (theta_0, theta_1, theta_2, theta_3).
struct PhaseSignature {
  std::array<Sign, 4> theta{Sign::Plus, Sign::Plus, Sign::Plus, Sign::Plus};

  double operator[](int i) const { return value(theta[static_cast<std::size_t>(i)]); }
  PhaseSignature operator-() const {
    PhaseSignature s;
    for (int i = 0; i < 4; ++i) s.theta[i] = -theta[i];
    return s;
  }
  /// "+-+-" style label.
  std::string label() const;
  static PhaseSignature parse(const std::string& label);
  /// All 16 signatures, (+,+,+,+) first, theta_3 varying fastest.
  static std::array<PhaseSignature, 16> all();

  bool null_structure() const { return theta[0] == theta[1]; }
  bool resonant_case() const { return theta[2] != theta[3]; }

  friend bool operator==(const PhaseSignature&, const PhaseSignature&) = default;
};

/// Which form of the trilinear phase is meant.
///   Minus: theta_0<xi> - theta_1<xi-eta> - theta_2<eta+sigma> + theta_3<sigma>
///   Plus:  theta_0<xi> - theta_1<xi+eta> + theta_2<xi+eta+sigma> - theta_3<xi+sigma>
/// The second arises from the first after relabelling frequencies; reports
/// carry the convention and never mix the two.
enum class PhaseConvention { Minus, Plus };

inline const char* to_string(PhaseConvention c) { return c == PhaseConvention::Minus ? "minus" : "plus"; }

template <class F>
F phase_value(const PhaseSignature& th, const Vec2<F>& xi, const Vec2<F>& eta,
              const Vec2<F>& sigma, PhaseConvention conv = PhaseConvention::Minus) {
  const F t0 = F(th[0]), t1 = F(th[1]), t2 = F(th[2]), t3 = F(th[3]);
  if (conv == PhaseConvention::Minus)
    return t0 * japanese<F>(xi) - t1 * japanese<F>(Vec2<F>(xi - eta)) -
           t2 * japanese<F>(Vec2<F>(eta + sigma)) + t3 * japanese<F>(sigma);
  return t0 * japanese<F>(xi) - t1 * japanese<F>(Vec2<F>(xi + eta)) +
         t2 * japanese<F>(Vec2<F>(xi + eta + sigma)) - t3 * japanese<F>(Vec2<F>(xi + sigma));
}

/// v / <v>, the gradient of <v>.
template <class F>
Vec2<F> bracket_gradient(const Vec2<F>& v) {
  return v / japanese<F>(v);
}

template <class F>
struct PhaseGradients {
  Vec2<F> d_xi, d_eta, d_sigma;
};

template <class F>
PhaseGradients<F> phase_gradients(const PhaseSignature& th, const Vec2<F>& xi,
                                  const Vec2<F>& eta, const Vec2<F>& sigma,
                                  PhaseConvention conv = PhaseConvention::Minus) {
  const F t0 = F(th[0]), t1 = F(th[1]), t2 = F(th[2]), t3 = F(th[3]);
  const Vec2<F> g0 = bracket_gradient<F>(xi);
  if (conv == PhaseConvention::Minus) {
    const Vec2<F> g1 = bracket_gradient<F>(Vec2<F>(xi - eta));
    const Vec2<F> g2 = bracket_gradient<F>(Vec2<F>(eta + sigma));
    const Vec2<F> g3 = bracket_gradient<F>(sigma);
    return {t0 * g0 - t1 * g1, t1 * g1 - t2 * g2, t3 * g3 - t2 * g2};
  }
  const Vec2<F> g1 = bracket_gradient<F>(Vec2<F>(xi + eta));
  const Vec2<F> g2 = bracket_gradient<F>(Vec2<F>(xi + eta + sigma));
  const Vec2<F> g3 = bracket_gradient<F>(Vec2<F>(xi + sigma));
  return {t0 * g0 - t1 * g1 + t2 * g2 - t3 * g3, t2 * g2 - t1 * g1, t2 * g2 - t3 * g3};
}

/// Bilinear phase theta(<eta> - <xi+eta>) of the same-sign density.
template <class F>
F bilinear_phase(Sign theta, const Vec2<F>& xi, const Vec2<F>& eta) {
  return F(value(theta)) * (japanese<F>(eta) - japanese<F>(Vec2<F>(xi + eta)));
}

/// Its eta-gradient theta(eta/<eta> - (xi+eta)/<xi+eta>).
template <class F>
Vec2<F> bilinear_phase_gradient(Sign theta, const Vec2<F>& xi, const Vec2<F>& eta) {
  return F(value(theta)) * (bracket_gradient<F>(eta) - bracket_gradient<F>(Vec2<F>(xi + eta)));
}

/// theta_0<xi> - theta_1<xi -/+ eta>, sign of eta following the convention.
template <class F>
F phase_01(Sign t0, Sign t1, const Vec2<F>& xi, const Vec2<F>& eta,
           PhaseConvention conv = PhaseConvention::Minus) {
  const Vec2<F> other = conv == PhaseConvention::Minus ? Vec2<F>(xi - eta) : Vec2<F>(xi + eta);
  return F(value(t0)) * japanese<F>(xi) - F(value(t1)) * japanese<F>(other);
}

// ---------------------------------------------------------------------------
// Sampling cells.

/// Radial range lo <= |v| <= hi; lo = 0 means a ball.
struct Annulus {
  double lo = 0.0, hi = 0.0;
  static Annulus dyadic(double N) { return {0.5 * N, 2.0 * N}; }
  bool contains(double r) const { return r >= lo && r <= hi; }
  /// Geometric midpoint, or hi / 2 for a ball.
  double representative() const { return lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi; }
};

enum class Combination { XiMinusEta, XiPlusEta, EtaPlusSigma, XiPlusSigma, XiPlusEtaPlusSigma };

const char* to_string(Combination c);
Combination parse_combination(const std::string& s);

struct Constraint {
  Combination which;
  Annulus range;
};

/// What is being sampled: the full trilinear phase, or the bilinear
/// same-sign phase of a density (eta and xi only; sigma is unused).
enum class PhaseKind { Trilinear, Bilinear };

struct ResonanceCell {
  std::string label;
  PhaseKind kind = PhaseKind::Trilinear;
  Annulus xi, eta, sigma;
  std::vector<Constraint> constraints;
};

struct FrequencyTriple {
  Vec2d xi, eta, sigma;
};

inline constexpr int kMinResonanceSamples = 1000;
/// Documented thresholds: a cell is time-nonresonant when the sampled
/// |phase| stays above 0.5, and space-nonresonant when the sampled gradient
/// stays above 0.1 times the dyadic prediction.
inline constexpr double kTimeNonresonantThreshold = 0.5;
inline constexpr double kSpaceNonresonantRatio = 0.1;

/// Uniform samples in each annulus (area-uniform radius, uniform angle),
/// rejected until all constraints hold. Throws EmptyCellError if no sample
/// survives.
std::vector<FrequencyTriple> sample_cell(const ResonanceCell& cell, int n_samples,
                                         std::uint64_t seed, int* attempts = nullptr);

struct PhaseMinima {
  double phase = 0.0;       ///< min |phi|
  double grad_eta = 0.0;    ///< min |grad_eta phi|
  double grad_sigma = 0.0;  ///< min |grad_sigma phi| (trilinear only)
  double phase_01 = 0.0;    ///< min |phi_01| (trilinear only)
  int samples = 0;
};

/// Minima of the phase quantities over an explicit sample set.
PhaseMinima phase_minima(const PhaseSignature& th, PhaseKind kind, PhaseConvention conv,
                         const std::vector<FrequencyTriple>& samples);

struct ResonanceReport {
  PhaseSignature signature;
  PhaseConvention convention = PhaseConvention::Minus;
  ResonanceCell cell;
  std::uint64_t seed = 0;
  int requested = 0;
  int attempts = 0;
  PhaseMinima minima;
  double predicted_eta = 0.0;
  double predicted_sigma = 0.0;
  double ratio_eta = 0.0;    ///< minima.grad_eta / predicted_eta
  double ratio_sigma = 0.0;  ///< minima.grad_sigma / predicted_sigma
  bool phase_nonresonant = false;  ///< min |phi| >= threshold
  bool phi01_nonresonant = false;  ///< min |phi_01| >= threshold
  bool time_nonresonant = false;   ///< either of the above
  bool space_nonresonant_eta = false;
  bool space_nonresonant_sigma = false;
};

/// Dyadic predictions for the gradient lower bounds.
///   Bilinear, |eta| ~ N1 with |xi + eta| ~ N2 (constraint XiPlusEta):
///     N / <N1>^3 when N1 ~ N2, N1 / <N1> when N1 >> N2 (ratio >= 8).
///   Trilinear: r_sigma / <r_max>^3 for the eta-gradient and
///     r_eta / <r_max>^3 for the sigma-gradient.
std::pair<double, double> predicted_gradient_bounds(const ResonanceCell& cell);

ResonanceReport classify_resonance(const PhaseSignature& th, const ResonanceCell& cell,
                                   int n_samples, std::uint64_t seed,
                                   PhaseConvention conv = PhaseConvention::Minus);

struct SignatureRow {
  PhaseSignature signature;
  double phase_at_origin = 0.0;  ///< minus convention
  bool null_structure = false;   ///< theta_0 = theta_1
  bool time_nonresonant = false; ///< theta_0 != theta_1, |phi_01| >= 2 everywhere
  bool resonant_case = false;    ///< theta_2 != theta_3
};

std::array<SignatureRow, 16> signature_table();

/// |phi| over an (eta_1, eta_2) slice at fixed xi, sigma, written as CSV
/// with header eta1,eta2,phi.
void write_phase_heatmap(std::ostream& os, const PhaseSignature& th, const Vec2d& xi,
                         const Vec2d& sigma, double half_width, int points,
                         PhaseConvention conv = PhaseConvention::Minus);

// ---------------------------------------------------------------------------
// Coifman-Meyer norm estimates.

/// One 2D frequency slot: points per axis and frequency spacing. Sample m
/// sits at signed index times spacing, FFT order.
struct SlotGrid {
  int points = 32;
  double spacing = 1.0;
  double frequency(int i) const { return (i < points / 2 ? i : i - points) * spacing; }
};

/// Scalar multiplier sampled on a product of 2 or 3 slots, row-major over
/// (slot0 axis1, slot0 axis2, slot1 axis1, ...).
struct SampledMultiplier {
  std::vector<SlotGrid> slots;
  std::vector<cplx> values;

  std::size_t size() const;
  std::vector<int> dims() const;
};

/// Upper limit on the number of samples in one estimate (about 512 MiB of
/// complex doubles).
inline constexpr std::size_t kCmSampleLimit = std::size_t{1} << 25;

/// Throws MemoryGuardError if the product grid exceeds kCmSampleLimit.
void check_cm_budget(const std::vector<SlotGrid>& slots);

template <class Fn>
SampledMultiplier sample_multiplier2(const SlotGrid& a, const SlotGrid& b, Fn&& m) {
  check_cm_budget({a, b});
  SampledMultiplier s{{a, b}, {}};
  s.values.reserve(s.size());
  for (int i1 = 0; i1 < a.points; ++i1)
    for (int i2 = 0; i2 < a.points; ++i2)
      for (int j1 = 0; j1 < b.points; ++j1)
        for (int j2 = 0; j2 < b.points; ++j2)
          s.values.push_back(cplx(m(Vec2d(a.frequency(i1), a.frequency(i2)),
                                    Vec2d(b.frequency(j1), b.frequency(j2)))));
  return s;
}

template <class Fn>
SampledMultiplier sample_multiplier3(const SlotGrid& a, const SlotGrid& b, const SlotGrid& c,
                                     Fn&& m) {
  check_cm_budget({a, b, c});
  SampledMultiplier s{{a, b, c}, {}};
  s.values.reserve(s.size());
  for (int i1 = 0; i1 < a.points; ++i1)
    for (int i2 = 0; i2 < a.points; ++i2)
      for (int j1 = 0; j1 < b.points; ++j1)
        for (int j2 = 0; j2 < b.points; ++j2)
          for (int k1 = 0; k1 < c.points; ++k1)
            for (int k2 = 0; k2 < c.points; ++k2)
              s.values.push_back(cplx(m(Vec2d(a.frequency(i1), a.frequency(i2)),
                                        Vec2d(b.frequency(j1), b.frequency(j2)),
                                        Vec2d(c.frequency(k1), c.frequency(k2)))));
  return s;
}

/// Grid approximation of the L^1 norm of the inverse Fourier kernel:
/// normalized inverse DFT over all slots, then the sum of magnitudes. The
/// constant multiplier 1 gives the discrete delta and the value 1.
double cm_norm_estimate(const SampledMultiplier& m);

/// Dyadic triple for the low-output cell |xi| ~ N0, |xi - eta| ~ N1,
/// |eta| ~ N2.
struct CaseOneCell {
  double n0 = 0.25, n1 = 2.0, n2 = 2.0;
};

struct CaseOneEstimate {
  CaseOneCell cell;
  double cm_norm = 0.0;     ///< max over matrix-vector entries
  double predicted = 0.0;   ///< <N0>^5 N1 / <N1>^2
  double ratio = 0.0;
};

/// CM estimate of Pi_{theta_0}(xi) <xi>^5 <eta>^{-1} grad_xi phi_01 times the
/// three cutoffs. The vector factor is split into its two components, each
/// giving a 2x2 matrix multiplier; the reported norm is the largest of the
/// eight scalar entries.
CaseOneEstimate case_one_multiplier_norm(const CaseOneCell& cell, Sign t0, Sign t1,
                                         int points = 32);

}  // namespace cspd
