#include "cspd/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "cspd/snapshot.hpp"

namespace cspd {
namespace {

using ojson = nlohmann::ordered_json;

long interval_index(double t, double interval) { return std::lround(t / interval); }

double bracket_t(double t) { return std::sqrt(1.0 + t * t); }

void info(std::ostream* log, const std::string& msg) {
  if (log) *log << msg << std::endl;
}

ojson to_json(const Envelope& e) {
  return {{"constant", e.highest}, {"first", e.first}, {"lowest", e.lowest},
          {"growth", e.growth},    {"samples", e.samples}};
}

ojson config_echo(const RunConfig& c) {
  const auto& v = c.physics.init.direction;
  ojson j;
  j["grid"] = {{"n", c.grid.n}, {"L", c.grid.L}};
  j["physics"] = {{"lambda", c.physics.lambda},
                  {"epsilon", c.physics.init.epsilon},
                  {"width", c.physics.init.width},
                  {"k0", {c.physics.init.carrier(0), c.physics.init.carrier(1)}},
                  {"v", {{v(0).real(), v(0).imag()}, {v(1).real(), v(1).imag()}}},
                  {"nonlinear", c.physics.nonlinear}};
  j["time"] = {{"dt", c.time.dt},
               {"t_end", c.time.t_end},
               {"sample_interval", c.time.sample_interval},
               {"max_halvings", c.time.max_halvings}};
  const auto& d = c.diagnostics;
  j["diagnostics"] = {{"tracked_N", d.tracked_N},
                      {"tracked_k", d.tracked_k},
                      {"high_s", d.high_s},
                      {"fit_window", {d.fit_t_a, d.fit_t_b}},
                      {"gamma", d.gamma},
                      {"delta", d.delta},
                      {"scattering_times", d.scattering_times},
                      {"allow_past_horizon", d.allow_past_horizon}};
  std::vector<std::string> formats;
  if (c.output.csv) formats.push_back("csv");
  if (c.output.json) formats.push_back("json");
  if (c.output.snapshots) formats.push_back("snapshots");
  j["output"] = {{"directory", c.output.directory.string()},
                 {"formats", formats},
                 {"checkpoint_interval", c.output.checkpoint_interval}};
  j["seed"] = c.seed;
  return j;
}

}  // namespace

void analyse_records(RunSummary& s) {
  const auto& cfg = s.config;
  const auto& d = cfg.diagnostics;
  const double ta = d.fit_t_a, tb = d.fit_t_b;
  std::vector<double> t;
  for (const auto& r : s.records) t.push_back(r.t);

  s.fits.clear();
  s.sup_envelopes.clear();
  std::vector<double> sup_max(t.size(), 0.0);
  for (std::size_t k = 0; k < d.tracked_k.size(); ++k) {
    std::vector<double> v, e;
    for (std::size_t i = 0; i < s.records.size(); ++i) {
      v.push_back(s.records[i].sup[k]);
      e.push_back(std::pow(bracket_t(t[i]), 0.75) * v.back());
      sup_max[i] = std::max(sup_max[i], e.back());
    }
    const std::string name = "sup_k" + std::to_string(d.tracked_k[k]);
    SeriesFit f{name, std::nullopt, {}};
    try {
      f.fit = fit_decay_exponent(t, v, ta, tb);
    } catch (const std::exception& ex) {
      f.error = ex.what();
    }
    s.fits.push_back(f);
    s.sup_envelopes.push_back({name, envelope(t, e, ta, tb)});
  }
  s.sup_envelope = {"sup_max", envelope(t, sup_max, ta, tb)};

  s.bilinear_envelopes.clear();
  s.time_derivative_envelopes.clear();
  const std::size_t nN = d.tracked_N.size();
  for (Sign th : {Sign::Plus, Sign::Minus}) {
    const std::size_t ti = th == Sign::Plus ? 0 : 1;
    const std::string tag = th == Sign::Plus ? "p" : "m";
    for (int mu = 0; mu < 3; ++mu)
      for (std::size_t a = 0; a < nN; ++a) {
        const double N = d.tracked_N[a];
        std::vector<double> e;
        for (std::size_t i = 0; i < s.records.size(); ++i)
          e.push_back(N * std::pow(bracket_t(t[i]), 1.75 - d.gamma) *
                      s.records[i].bilinear[(ti * 3 + static_cast<std::size_t>(mu)) * nN + a]);
        s.bilinear_envelopes.push_back(
            {"bilinear_" + tag + "_mu" + std::to_string(mu) + "_N" + format_dyadic(N),
             envelope(t, e, ta, tb)});
      }
    for (std::size_t a = 0; a < nN; ++a) {
      const double N = d.tracked_N[a];
      std::vector<double> e;
      for (std::size_t i = 0; i < s.records.size(); ++i)
        e.push_back(std::pow(japanese(N), 5) * std::pow(bracket_t(t[i]), 1.5) *
                    s.records[i].time_derivative[ti * nN + a]);
      s.time_derivative_envelopes.push_back(
          {"dtf_" + tag + "_N" + format_dyadic(N), envelope(t, e, ta, tb)});
    }
  }

  s.max_mass_drift = 0.0;
  s.residual_max = {};
  if (!s.records.empty()) {
    const double m0 = s.records.front().mass;
    for (const auto& r : s.records) {
      if (m0 > 0.0) s.max_mass_drift = std::max(s.max_mass_drift, std::abs(r.mass - m0) / m0);
      s.residual_max.curl1 = std::max(s.residual_max.curl1, r.gauge.curl1);
      s.residual_max.curl2 = std::max(s.residual_max.curl2, r.gauge.curl2);
      s.residual_max.charge = std::max(s.residual_max.charge, r.gauge.charge);
      s.residual_max.divergence = std::max(s.residual_max.divergence, r.gauge.divergence);
    }
    const auto& r0 = s.records.front();
    s.initial_weighted_norm = std::hypot(r0.weighted_plus, r0.weighted_minus);
  }
}

std::string summary_json(const RunSummary& s) {
  ojson j;
  j["config"] = config_echo(s.config);
  j["horizon"] = s.horizon;
  j["dt_used"] = s.dt_used;
  j["dt_halvings"] = s.halvings;
  j["fits"] = ojson::array();
  for (const auto& f : s.fits) {
    ojson o{{"series", f.series}};
    if (f.fit) {
      o["t_a"] = f.fit->t_a;
      o["t_b"] = f.fit->t_b;
      o["exponent"] = f.fit->exponent;
      o["amplitude"] = f.fit->amplitude;
      o["residual"] = f.fit->residual;
      o["samples"] = f.fit->samples;
    } else {
      o["error"] = f.error;
    }
    j["fits"].push_back(o);
  }
  ojson env;
  env["sup_max"] = to_json(s.sup_envelope.env);
  for (const auto* group : {&s.sup_envelopes, &s.bilinear_envelopes, &s.time_derivative_envelopes})
    for (const auto& e : *group) env[e.name] = to_json(e.env);
  j["envelopes"] = env;
  j["scattering"] = ojson::array();
  for (const auto& e : s.scattering)
    j["scattering"].push_back({{"t", e.t}, {"t2", 2.0 * e.t}, {"plus", e.plus},
                               {"minus", e.minus}, {"increment", e.combined}});
  j["initial_weighted_norm"] = s.initial_weighted_norm;
  j["residual_maxima"] = {{"mass_drift", s.max_mass_drift},
                          {"gauge_curl1", s.residual_max.curl1},
                          {"gauge_curl2", s.residual_max.curl2},
                          {"gauge_charge", s.residual_max.charge},
                          {"gauge_divergence", s.residual_max.divergence}};
  j["samples"] = s.records.size();
  j["wall_time"] = s.wall_seconds;
  return j.dump(2) + "\n";
}

RunSummary run_simulation(const RunConfig& cfg, std::ostream* log) {
  if (auto errs = validate(cfg); !errs.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  const auto wall0 = std::chrono::steady_clock::now();

  RunSummary s;
  s.config = cfg;
  s.horizon = cfg.horizon();
  s.directory = output_directory(cfg.output.directory);
  std::filesystem::create_directories(s.directory);

  const Grid grid(cfg.grid.n, cfg.grid.L);
  const ProfileSystem sys(grid, cfg.physics.lambda, cfg.physics.nonlinear);
  DiagnosticsConfig dc;
  dc.tracked_N = cfg.diagnostics.tracked_N;
  dc.tracked_k = cfg.diagnostics.tracked_k;
  dc.high_s = cfg.diagnostics.high_s;
  dc.horizon = s.horizon;
  const DiagnosticsSampler sampler(sys, dc);
  s.columns = sampler.column_names();

  ProfileState state = make_initial_state(grid, cfg.physics.init);
  const double interval = cfg.time.sample_interval;
  const long n_intervals = interval_index(cfg.time.t_end, interval);
  const long checkpoint_every =
      cfg.output.checkpoint_interval > 0.0
          ? std::max(1L, interval_index(cfg.output.checkpoint_interval, interval))
          : 0;
  const auto checkpoint_prefix = s.directory / "checkpoint";
  auto meta = [&](const ProfileState& st, double dt) {
    return CheckpointMeta{st.t, dt, cfg.physics.lambda, cfg.physics.init, cfg.grid.L, cfg.grid.n};
  };

  std::map<long, ProfileState> kept;
  for (double t : cfg.diagnostics.scattering_times) {
    kept.emplace(interval_index(t, interval), ProfileState{});
    kept.emplace(interval_index(2.0 * t, interval), ProfileState{});
  }
  auto keep = [&](long idx, const ProfileState& st) {
    if (auto it = kept.find(idx); it != kept.end()) it->second = st;
  };

  std::ofstream csv;
  if (cfg.output.csv) {
    csv.open(s.directory / "diagnostics.csv");
    if (!csv) throw FormatError("cannot open diagnostics.csv in " + s.directory.string());
    sampler.write_header(csv);
  }
  auto record = [&](const ProfileState& st) {
    s.records.push_back(sampler.measure(st));
    if (csv.is_open()) {
      sampler.write_row(csv, s.records.back());
      csv.flush();
    }
  };

  if (cfg.output.snapshots) write_snapshot((s.directory / "psi_initial.cspd").string(), sys.synthesize(state));
  record(state);
  keep(0, state);

  double dt = cfg.time.dt;
  for (long i = 0; i < n_intervals; ++i) {
    const ProfileState base = state;
    for (;;) {
      try {
        state = base;
        const long m = std::lround(interval / dt);
        for (long k = 0; k < m; ++k) state = sys.step_rk4(state, dt);
        break;
      } catch (const DivergenceError& e) {
        if (s.halvings >= cfg.time.max_halvings) {
          write_checkpoint(checkpoint_prefix, base, meta(base, dt));
          info(log, std::string("divergence: ") + e.what() + "; last good state checkpointed");
          throw;
        }
        dt *= 0.5;
        ++s.halvings;
        info(log, std::string("divergence: ") + e.what() + "; retrying with dt = " + std::to_string(dt));
      }
    }
    state.t = static_cast<double>(i + 1) * interval;
    record(state);
    keep(i + 1, state);
    if (checkpoint_every > 0 && (i + 1) % checkpoint_every == 0)
      write_checkpoint(checkpoint_prefix, state, meta(state, dt));
    if (log && (i + 1) % 10 == 0)
      info(log, "t = " + std::to_string(state.t) + ", mass = " + std::to_string(s.records.back().mass));
  }
  s.dt_used = dt;

  for (double t : cfg.diagnostics.scattering_times) {
    const auto& a = kept.at(interval_index(t, interval));
    const auto& b = kept.at(interval_index(2.0 * t, interval));
    ScatteringEntry e;
    e.t = t;
    e.plus = scattering_increment(a.f_plus, b.f_plus);
    e.minus = scattering_increment(a.f_minus, b.f_minus);
    e.combined = std::hypot(e.plus, e.minus);
    s.scattering.push_back(e);
  }

  if (cfg.output.snapshots) {
    const SpinorField psi_hat = sys.synthesize(state);
    write_snapshot((s.directory / "psi_final.cspd").string(), psi_hat);
    const SpinorField psi = to_physical(psi_hat);
    write_gauge_snapshot((s.directory / "gauge_final.cspd").string(),
                         solve_static_gauge(current(psi, 0), current(psi, 1), current(psi, 2),
                                            cfg.physics.lambda));
  }
  if (checkpoint_every > 0) write_checkpoint(checkpoint_prefix, state, meta(state, dt));

  analyse_records(s);
  s.final_state = std::move(state);
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  if (cfg.output.json) {
    std::ofstream js(s.directory / "summary.json");
    js << summary_json(s);
    if (!js) throw FormatError("cannot write summary.json");
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

ojson annulus_json(const Annulus& a) { return {{"lo", a.lo}, {"hi", a.hi}}; }

ojson report_json(const ResonanceReport& r) {
  ojson cell{{"label", r.cell.label},
             {"kind", r.cell.kind == PhaseKind::Trilinear ? "trilinear" : "bilinear"},
             {"xi", annulus_json(r.cell.xi)},
             {"eta", annulus_json(r.cell.eta)}};
  if (r.cell.kind == PhaseKind::Trilinear) cell["sigma"] = annulus_json(r.cell.sigma);
  cell["constraints"] = ojson::array();
  for (const auto& c : r.cell.constraints)
    cell["constraints"].push_back({{"of", to_string(c.which)}, {"lo", c.range.lo}, {"hi", c.range.hi}});
  ojson j{{"signature", r.signature.label()},
          {"convention", to_string(r.convention)},
          {"cell", cell},
          {"seed", r.seed},
          {"requested", r.requested},
          {"samples", r.minima.samples},
          {"attempts", r.attempts},
          {"min_abs_phase", r.minima.phase},
          {"min_grad_eta", r.minima.grad_eta}};
  if (r.cell.kind == PhaseKind::Trilinear) {
    j["min_grad_sigma"] = r.minima.grad_sigma;
    j["min_abs_phi01"] = r.minima.phase_01;
    j["predicted_grad_sigma"] = r.predicted_sigma;
    j["ratio_sigma"] = r.ratio_sigma;
  }
  j["predicted_grad_eta"] = r.predicted_eta;
  j["ratio_eta"] = r.ratio_eta;
  j["phase_nonresonant"] = r.phase_nonresonant;
  j["phi01_nonresonant"] = r.phi01_nonresonant;
  j["time_nonresonant"] = r.time_nonresonant;
  j["resonant"] = !r.time_nonresonant;
  j["space_nonresonant_eta"] = r.space_nonresonant_eta;
  if (r.cell.kind == PhaseKind::Trilinear) j["space_nonresonant_sigma"] = r.space_nonresonant_sigma;
  return j;
}

}  // namespace

ResonanceOutput run_resonance_report(const ResonanceConfig& cfg, std::ostream* log) {
  if (auto errs = validate(cfg); !errs.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  ResonanceOutput out;
  out.directory = output_directory(cfg.directory);
  std::filesystem::create_directories(out.directory);

  ojson arr = ojson::array();
  for (const auto& sig : cfg.signatures)
    for (const auto& cell : cfg.cells) {
      out.reports.push_back(classify_resonance(sig, cell, cfg.n_samples, cfg.seed, cfg.convention));
      arr.push_back(report_json(out.reports.back()));
    }
  info(log, std::to_string(out.reports.size()) + " resonance reports");
  {
    std::ofstream os(out.directory / "resonance.json");
    os << arr.dump(2) << "\n";
    if (!os) throw FormatError("cannot write resonance.json");
  }

  out.table = signature_table();
  ojson summary;
  summary["convention"] = to_string(cfg.convention);
  summary["seed"] = cfg.seed;
  summary["n_samples"] = cfg.n_samples;
  summary["time_nonresonant_threshold"] = kTimeNonresonantThreshold;
  summary["space_nonresonant_ratio"] = kSpaceNonresonantRatio;
  summary["signature_table"] = ojson::array();
  for (const auto& r : out.table)
    summary["signature_table"].push_back({{"signature", r.signature.label()},
                                          {"phase_at_origin", r.phase_at_origin},
                                          {"null_structure", r.null_structure},
                                          {"time_nonresonant", r.time_nonresonant},
                                          {"resonant_case", r.resonant_case}});

  const SampledMultiplier unit = sample_multiplier2(
      SlotGrid{cfg.cm_points, 1.0}, SlotGrid{cfg.cm_points, 1.0},
      [](const Vec2d&, const Vec2d&) { return cplx(1.0); });
  ojson cm{{"points", cfg.cm_points}, {"unit_multiplier", cm_norm_estimate(unit)}};
  cm["case_one"] = ojson::array();
  for (const auto& cell : cfg.case_one_cells) {
    out.case_one.push_back(case_one_multiplier_norm(cell, Sign::Plus, Sign::Plus, cfg.cm_points));
    const auto& e = out.case_one.back();
    out.case_one_constant = std::max(out.case_one_constant, e.ratio);
    cm["case_one"].push_back({{"N0", cell.n0}, {"N1", cell.n1}, {"N2", cell.n2},
                              {"cm_norm", e.cm_norm}, {"predicted", e.predicted},
                              {"ratio", e.ratio}});
  }
  cm["case_one_constant"] = out.case_one_constant;
  summary["cm"] = cm;

  summary["heatmaps"] = ojson::array();
  for (const auto& h : cfg.heatmaps) {
    const auto path = out.directory / h.file;
    std::ofstream os(path);
    write_phase_heatmap(os, h.signature, h.xi, h.sigma, h.half_width, h.points, cfg.convention);
    if (!os) throw FormatError("cannot write " + path.string());
    out.heatmaps.push_back(path);
    summary["heatmaps"].push_back({{"file", h.file},
                                   {"signature", h.signature.label()},
                                   {"xi", {h.xi(0), h.xi(1)}},
                                   {"sigma", {h.sigma(0), h.sigma(1)}},
                                   {"half_width", h.half_width},
                                   {"points", h.points}});
  }
  std::ofstream os(out.directory / "resonance_summary.json");
  os << summary.dump(2) << "\n";
  if (!os) throw FormatError("cannot write resonance_summary.json");
  return out;
}

}  // namespace cspd
