#include "cspd/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "cspd/fft.hpp"

namespace cspd {

std::string PhaseSignature::label() const {
  std::string s;
  for (Sign t : theta) s += to_char(t);
  return s;
}

PhaseSignature PhaseSignature::parse(const std::string& label) {
  if (label.size() != 4) throw ParameterError("signature must have four signs, got '" + label + "'");
  PhaseSignature s;
  for (std::size_t i = 0; i < 4; ++i) {
    if (label[i] == '+') s.theta[i] = Sign::Plus;
    else if (label[i] == '-') s.theta[i] = Sign::Minus;
    else throw ParameterError("signature characters must be + or -, got '" + label + "'");
  }
  return s;
}

std::array<PhaseSignature, 16> PhaseSignature::all() {
  std::array<PhaseSignature, 16> out;
  for (int code = 0; code < 16; ++code)
    for (int b = 0; b < 4; ++b)
      out[static_cast<std::size_t>(code)].theta[static_cast<std::size_t>(b)] =
          (code >> (3 - b)) & 1 ? Sign::Minus : Sign::Plus;
  return out;
}

const char* to_string(Combination c) {
  switch (c) {
    case Combination::XiMinusEta: return "xi-eta";
    case Combination::XiPlusEta: return "xi+eta";
    case Combination::EtaPlusSigma: return "eta+sigma";
    case Combination::XiPlusSigma: return "xi+sigma";
    case Combination::XiPlusEtaPlusSigma: return "xi+eta+sigma";
  }
  return "?";
}

Combination parse_combination(const std::string& s) {
  for (Combination c : {Combination::XiMinusEta, Combination::XiPlusEta, Combination::EtaPlusSigma,
                        Combination::XiPlusSigma, Combination::XiPlusEtaPlusSigma})
    if (s == to_string(c)) return c;
  throw ParameterError("unknown frequency combination '" + s + "'");
}

namespace {

Vec2d combine(Combination c, const FrequencyTriple& f) {
  switch (c) {
    case Combination::XiMinusEta: return f.xi - f.eta;
    case Combination::XiPlusEta: return f.xi + f.eta;
    case Combination::EtaPlusSigma: return f.eta + f.sigma;
    case Combination::XiPlusSigma: return f.xi + f.sigma;
    case Combination::XiPlusEtaPlusSigma: return f.xi + f.eta + f.sigma;
  }
  return Vec2d::Zero();
}

void check_annulus(const Annulus& a, const char* what) {
  if (!(a.lo >= 0.0) || !(a.hi > a.lo) || !std::isfinite(a.hi))
    throw ParameterError(std::string("resonance cell: bad radial range for ") + what);
}

Vec2d draw(const Annulus& a, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::sqrt(a.lo * a.lo + u(rng) * (a.hi * a.hi - a.lo * a.lo));
  const double phi = 2.0 * std::numbers::pi * u(rng);
  return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace

std::vector<FrequencyTriple> sample_cell(const ResonanceCell& cell, int n_samples,
                                         std::uint64_t seed, int* attempts) {
  if (n_samples <= 0) throw ParameterError("sample_cell: sample count must be positive");
  check_annulus(cell.xi, "xi");
  check_annulus(cell.eta, "eta");
  if (cell.kind == PhaseKind::Trilinear) check_annulus(cell.sigma, "sigma");
  for (const auto& c : cell.constraints) check_annulus(c.range, to_string(c.which));

  std::mt19937_64 rng(seed);
  std::vector<FrequencyTriple> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  const long max_attempts = 200L * n_samples;
  long tries = 0;
  while (static_cast<int>(out.size()) < n_samples && tries < max_attempts) {
    ++tries;
    FrequencyTriple f{draw(cell.xi, rng), draw(cell.eta, rng),
                      cell.kind == PhaseKind::Trilinear ? draw(cell.sigma, rng) : Vec2d::Zero()};
    bool ok = true;
    for (const auto& c : cell.constraints)
      if (!c.range.contains(combine(c.which, f).norm())) {
        ok = false;
        break;
      }
    if (ok) out.push_back(f);
  }
  if (attempts) *attempts = static_cast<int>(tries);
  if (out.empty())
    throw EmptyCellError("resonance cell '" + cell.label + "': no sample satisfies the constraints");
  return out;
}

PhaseMinima phase_minima(const PhaseSignature& th, PhaseKind kind, PhaseConvention conv,
                         const std::vector<FrequencyTriple>& samples) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  PhaseMinima m{inf, inf, inf, inf, static_cast<int>(samples.size())};
  for (const auto& f : samples) {
    if (kind == PhaseKind::Bilinear) {
      m.phase = std::min(m.phase, std::abs(bilinear_phase(th.theta[0], f.xi, f.eta)));
      m.grad_eta = std::min(m.grad_eta, bilinear_phase_gradient(th.theta[0], f.xi, f.eta).norm());
      continue;
    }
    m.phase = std::min(m.phase, std::abs(phase_value(th, f.xi, f.eta, f.sigma, conv)));
    const auto g = phase_gradients(th, f.xi, f.eta, f.sigma, conv);
    m.grad_eta = std::min(m.grad_eta, g.d_eta.norm());
    m.grad_sigma = std::min(m.grad_sigma, g.d_sigma.norm());
    m.phase_01 = std::min(m.phase_01, std::abs(phase_01(th.theta[0], th.theta[1], f.xi, f.eta, conv)));
  }
  if (kind == PhaseKind::Bilinear) m.grad_sigma = m.phase_01 = 0.0;
  return m;
}

std::pair<double, double> predicted_gradient_bounds(const ResonanceCell& cell) {
  if (cell.kind == PhaseKind::Bilinear) {
    const double n = cell.xi.representative();
    const double n1 = cell.eta.representative();
    double n2 = n1;
    for (const auto& c : cell.constraints)
      if (c.which == Combination::XiPlusEta) n2 = c.range.representative();
    if (n1 >= 8.0 * n2) return {n1 / japanese(n1), 0.0};
    return {n / std::pow(japanese(std::max(n1, n2)), 3), 0.0};
  }
  const double re = cell.eta.representative(), rs = cell.sigma.representative();
  const double rmax = std::max({cell.xi.representative(), re, rs});
  const double cube = std::pow(japanese(rmax), 3);
  return {rs / cube, re / cube};
}

ResonanceReport classify_resonance(const PhaseSignature& th, const ResonanceCell& cell,
                                   int n_samples, std::uint64_t seed, PhaseConvention conv) {
  if (n_samples < kMinResonanceSamples)
    throw ParameterError("classify_resonance: need at least " +
                         std::to_string(kMinResonanceSamples) + " samples");
  ResonanceReport r;
  r.signature = th;
  r.convention = conv;
  r.cell = cell;
  r.seed = seed;
  r.requested = n_samples;
  const auto samples = sample_cell(cell, n_samples, seed, &r.attempts);
  r.minima = phase_minima(th, cell.kind, conv, samples);
  std::tie(r.predicted_eta, r.predicted_sigma) = predicted_gradient_bounds(cell);
  if (r.predicted_eta > 0.0) r.ratio_eta = r.minima.grad_eta / r.predicted_eta;
  if (r.predicted_sigma > 0.0) r.ratio_sigma = r.minima.grad_sigma / r.predicted_sigma;
  r.phase_nonresonant = r.minima.phase >= kTimeNonresonantThreshold;
  r.phi01_nonresonant =
      cell.kind == PhaseKind::Trilinear && r.minima.phase_01 >= kTimeNonresonantThreshold;
  r.time_nonresonant = r.phase_nonresonant || r.phi01_nonresonant;
  r.space_nonresonant_eta = r.predicted_eta > 0.0 && r.ratio_eta >= kSpaceNonresonantRatio;
  r.space_nonresonant_sigma = r.predicted_sigma > 0.0 && r.ratio_sigma >= kSpaceNonresonantRatio;
  return r;
}

std::array<SignatureRow, 16> signature_table() {
  std::array<SignatureRow, 16> rows;
  const auto sigs = PhaseSignature::all();
  const Vec2d zero = Vec2d::Zero();
  for (std::size_t i = 0; i < 16; ++i) {
    const auto& s = sigs[i];
    rows[i] = {s, phase_value(s, zero, zero, zero), s.null_structure(), !s.null_structure(),
               s.resonant_case()};
  }
  return rows;
}

void write_phase_heatmap(std::ostream& os, const PhaseSignature& th, const Vec2d& xi,
                         const Vec2d& sigma, double half_width, int points, PhaseConvention conv) {
  if (points < 2 || !(half_width > 0.0)) throw ParameterError("heatmap: need >= 2 points and positive width");
  os << "eta1,eta2,phi\n";
  char buf[96];
  for (int a = 0; a < points; ++a)
    for (int b = 0; b < points; ++b) {
      const Vec2d eta(-half_width + 2.0 * half_width * a / (points - 1),
                      -half_width + 2.0 * half_width * b / (points - 1));
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", eta(0), eta(1),
                    std::abs(phase_value(th, xi, eta, sigma, conv)));
      os << buf;
    }
}

// ---------------------------------------------------------------------------

std::size_t SampledMultiplier::size() const {
  std::size_t s = 1;
  for (const auto& g : slots) s *= static_cast<std::size_t>(g.points) * static_cast<std::size_t>(g.points);
  return s;
}

std::vector<int> SampledMultiplier::dims() const {
  std::vector<int> d;
  for (const auto& g : slots) {
    d.push_back(g.points);
    d.push_back(g.points);
  }
  return d;
}

void check_cm_budget(const std::vector<SlotGrid>& slots) {
  if (slots.size() < 1 || slots.size() > 3) throw ParameterError("cm estimate: 1 to 3 slots");
  double total = 1.0;
  for (const auto& g : slots) {
    if (g.points < 2 || !(g.spacing > 0.0)) throw ParameterError("cm estimate: bad slot grid");
    total *= static_cast<double>(g.points) * g.points;
  }
  if (total > static_cast<double>(kCmSampleLimit))
    throw MemoryGuardError("cm estimate: " + std::to_string(static_cast<long long>(total)) +
                           " samples exceed the limit of " + std::to_string(kCmSampleLimit));
}

double cm_norm_estimate(const SampledMultiplier& m) {
  check_cm_budget(m.slots);
  if (m.values.size() != m.size()) throw ParameterError("cm estimate: value count does not match slots");
  std::vector<cplx> k = m.values;
  fft_nd(k, m.dims(), true);
  double s = 0.0;
  for (const cplx& v : k) s += std::abs(v);
  return s / static_cast<double>(k.size());
}

CaseOneEstimate case_one_multiplier_norm(const CaseOneCell& cell, Sign t0, Sign t1, int points) {
  if (!(cell.n0 > 0.0 && cell.n1 > 0.0 && cell.n2 > 0.0))
    throw ParameterError("case (i) cell: dyadic numbers must be positive");
  // Each box holds the whole support (radius 2N) with a margin.
  const SlotGrid gx{points, 5.0 * cell.n0 / points};
  const SlotGrid ge{points, 5.0 * cell.n2 / points};

  CaseOneEstimate out;
  out.cell = cell;
  for (int row = 0; row < 2; ++row)
    for (int col = 0; col < 2; ++col)
      for (int comp = 0; comp < 2; ++comp) {
        auto entry = [&](const Vec2d& xi, const Vec2d& eta) {
          const double cut = lp_annulus(xi.norm(), cell.n0) *
                             lp_annulus((xi - eta).norm(), cell.n1) *
                             lp_annulus(eta.norm(), cell.n2);
          if (cut == 0.0) return cplx(0.0);
          const Vec2d grad =
              value(t0) * bracket_gradient(xi) - value(t1) * bracket_gradient(Vec2d(xi - eta));
          const cplx p = projection_symbol(xi, t0)(row, col);
          return p * std::pow(japanese(xi), 5) / japanese(eta) * grad(comp) * cut;
        };
        const double v = cm_norm_estimate(sample_multiplier2(gx, ge, entry));
        out.cm_norm = std::max(out.cm_norm, v);
      }
  out.predicted = std::pow(japanese(cell.n0), 5) * cell.n1 / std::pow(japanese(cell.n1), 2);
  out.ratio = out.cm_norm / out.predicted;
  return out;
}

}  // namespace cspd
