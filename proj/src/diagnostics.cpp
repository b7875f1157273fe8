#include "cspd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cspd {

double weighted_profile_norm(const SpinorField& f_hat, double s) {
  require_space(f_hat.space, Space::Fourier, "weighted_profile_norm");
  const Grid& g = f_hat.grid;
  const SpinorField f = to_physical(f_hat);
  double acc = std::pow(sobolev_norm(f_hat, s), 2);
  for (int axis = 0; axis < 2; ++axis) {
    SpinorField xf(g, Space::Physical);
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j) {
        const double x = axis == 0 ? g.position(i) : g.position(j);
        for (int c = 0; c < 2; ++c) xf[c](i, j) = x * f[c](i, j);
      }
    acc += std::pow(sobolev_norm(to_fourier(xf), s), 2);
  }
  return std::sqrt(acc);
}

double sup_norm_w(const SpinorField& psi_hat, int k) {
  require_space(psi_hat.space, Space::Fourier, "sup_norm_w");
  if (k < 0) throw ParameterError("sup_norm_w: k must be nonnegative");
  const SpinorField w =
      k == 0 ? psi_hat
             : apply_multiplier(psi_hat, [k](const Vec2d& xi) { return cplx(std::pow(japanese(xi), k)); });
  const SpinorField p = to_physical(w);
  return std::sqrt((p[0].abs2() + p[1].abs2()).maxCoeff());
}

double bilinear_dyadic_norm(const SpinorField& psi_theta_hat, int mu, double N) {
  require_space(psi_theta_hat.space, Space::Fourier, "bilinear_dyadic_norm");
  check_dyadic(psi_theta_hat.grid, N);
  const RealField j = current(to_physical(psi_theta_hat), mu);
  return l2_norm(lp_project(to_fourier(complexify(j)), N));
}

double profile_time_derivative_norm(const ProfileSystem& sys, const ProfileState& s, double N,
                                    Sign theta) {
  check_dyadic(sys.grid(), N);
  const auto d = sys.rhs(s);
  return l2_norm(lp_project(theta == Sign::Plus ? d.first : d.second, N));
}

double scattering_increment(const SpinorField& f_t1, const SpinorField& f_t2) {
  return weighted_profile_norm(f_t2 - f_t1, 5.0);
}

double wraparound_horizon(double box_length, double width) {
  return 0.5 * box_length - 4.0 * width;
}

DecayFit fit_decay_exponent(std::span<const double> t, std::span<const double> value, double t_a,
                            double t_b) {
  if (t.size() != value.size()) throw ParameterError("fit_decay_exponent: length mismatch");
  if (!(t_a > 0.0) || !(t_b > t_a)) throw ParameterError("fit_decay_exponent: need 0 < t_a < t_b");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_a || t[i] > t_b) continue;
    if (!(value[i] > 0.0) || !std::isfinite(value[i]))
      throw FitError("fit_decay_exponent: nonpositive value at t = " + std::to_string(t[i]));
    lx.push_back(std::log(t[i]));
    ly.push_back(std::log(value[i]));
  }
  const auto m = static_cast<int>(lx.size());
  if (m < kMinFitSamples)
    throw FitError("fit_decay_exponent: window holds " + std::to_string(m) + " samples, need " +
                   std::to_string(kMinFitSamples));

  double mx = 0.0, my = 0.0;
  for (int i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  DecayFit fit;
  fit.t_a = t_a;
  fit.t_b = t_b;
  fit.samples = m;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.amplitude = std::exp(intercept);
  double r2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double r = ly[i] - (intercept + fit.exponent * lx[i]);
    r2 += r * r;
  }
  fit.residual = std::sqrt(r2 / m);
  return fit;
}

Envelope envelope(std::span<const double> t, std::span<const double> e, double t_a, double t_b) {
  if (t.size() != e.size()) throw ParameterError("envelope: length mismatch");
  Envelope out;
  double running_min = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_a || t[i] > t_b) continue;
    if (!any) {
      out.first = e[i];
      out.lowest = out.highest = running_min = e[i];
      any = true;
    }
    out.highest = std::max(out.highest, e[i]);
    out.lowest = std::min(out.lowest, e[i]);
    if (running_min > 0.0) out.growth = std::max(out.growth, e[i] / running_min);
    running_min = std::min(running_min, e[i]);
    ++out.samples;
  }
  if (!any) throw FitError("envelope: empty window");
  return out;
}

// ---------------------------------------------------------------------------

std::string format_dyadic(double N) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", N);
  return buf;
}

DiagnosticsSampler::DiagnosticsSampler(const ProfileSystem& sys, DiagnosticsConfig cfg)
    : sys_(sys), cfg_(std::move(cfg)) {
  for (double N : cfg_.tracked_N) check_dyadic(sys.grid(), N);
  for (int k : cfg_.tracked_k)
    if (k < 0 || k > 7) throw ParameterError("diagnostics: tracked k must lie in 0..7");
}

std::size_t DiagnosticsSampler::bilinear_index(Sign theta, int mu, std::size_t n_index) const {
  const std::size_t th = theta == Sign::Plus ? 0 : 1;
  return (th * 3 + static_cast<std::size_t>(mu)) * cfg_.tracked_N.size() + n_index;
}

std::size_t DiagnosticsSampler::time_derivative_index(Sign theta, std::size_t n_index) const {
  const std::size_t th = theta == Sign::Plus ? 0 : 1;
  return th * cfg_.tracked_N.size() + n_index;
}

DiagnosticsRecord DiagnosticsSampler::measure(const ProfileState& s) const {
  DiagnosticsRecord r;
  r.t = s.t;
  const SpinorField psi_hat = sys_.synthesize(s);
  r.mass = squared_l2_norm(psi_hat);
  r.h0 = sobolev_norm(psi_hat, 0.0);
  r.h5 = sobolev_norm(psi_hat, 5.0);
  r.h_high = sobolev_norm(psi_hat, cfg_.high_s);
  r.weighted_plus = weighted_profile_norm(s.f_plus, cfg_.weighted_s);
  r.weighted_minus = weighted_profile_norm(s.f_minus, cfg_.weighted_s);
  for (int k : cfg_.tracked_k) r.sup.push_back(sup_norm_w(psi_hat, k));

  const std::size_t nN = cfg_.tracked_N.size();
  r.bilinear.assign(6 * nN, 0.0);
  r.time_derivative.assign(2 * nN, 0.0);
  const auto d = sys_.rhs(s);
  for (Sign th : {Sign::Plus, Sign::Minus}) {
    const SpinorField psi_phys = to_physical(sys_.component(s, th));
    for (int mu = 0; mu < 3; ++mu) {
      const ScalarField j_hat = to_fourier(complexify(current(psi_phys, mu)));
      for (std::size_t a = 0; a < nN; ++a)
        r.bilinear[bilinear_index(th, mu, a)] = l2_norm(lp_project(j_hat, cfg_.tracked_N[a]));
    }
    const SpinorField& df = th == Sign::Plus ? d.first : d.second;
    for (std::size_t a = 0; a < nN; ++a)
      r.time_derivative[time_derivative_index(th, a)] = l2_norm(lp_project(df, cfg_.tracked_N[a]));
  }

  const SpinorField psi = to_physical(psi_hat);
  const RealField j0 = current(psi, 0), j1 = current(psi, 1), j2 = current(psi, 2);
  r.gauge = gauge_residual(solve_static_gauge(j0, j1, j2, sys_.lambda()), j0, j1, j2);
  r.past_horizon = cfg_.horizon > 0.0 && s.t > cfg_.horizon;
  return r;
}

std::vector<std::string> DiagnosticsSampler::column_names() const {
  std::vector<std::string> c{"t", "mass", "hs_0", "hs_5", "hs_" + format_dyadic(cfg_.high_s),
                             "weighted_plus", "weighted_minus"};
  for (int k : cfg_.tracked_k) c.push_back("sup_k" + std::to_string(k));
  for (Sign th : {Sign::Plus, Sign::Minus})
    for (int mu = 0; mu < 3; ++mu)
      for (double N : cfg_.tracked_N)
        c.push_back(std::string("bilinear_") + (th == Sign::Plus ? "p" : "m") + "_mu" +
                    std::to_string(mu) + "_N" + format_dyadic(N));
  for (Sign th : {Sign::Plus, Sign::Minus})
    for (double N : cfg_.tracked_N)
      c.push_back(std::string("dtf_") + (th == Sign::Plus ? "p" : "m") + "_N" + format_dyadic(N));
  for (const char* s : {"gauge_curl1", "gauge_curl2", "gauge_charge", "gauge_divergence",
                        "past_horizon"})
    c.emplace_back(s);
  return c;
}

void DiagnosticsSampler::write_header(std::ostream& os) const {
  const auto c = column_names();
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << "\n";
}

namespace {

void put(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, ",%.17g", v);
  os << buf;
}

}  // namespace

void DiagnosticsSampler::write_row(std::ostream& os, const DiagnosticsRecord& r) const {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", r.t);
  os << buf;
  for (double v : {r.mass, r.h0, r.h5, r.h_high, r.weighted_plus, r.weighted_minus}) put(os, v);
  for (double v : r.sup) put(os, v);
  for (double v : r.bilinear) put(os, v);
  for (double v : r.time_derivative) put(os, v);
  for (double v : {r.gauge.curl1, r.gauge.curl2, r.gauge.charge, r.gauge.divergence}) put(os, v);
  os << (r.past_horizon ? ",1" : ",0") << "\n";
}

}  // namespace cspd
