#include "cspd/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace cspd {
namespace {

// Collects problems instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& key, const std::string& what) { errors.push_back(key + ": " + what); }

  void check_keys(const YAML::Node& node, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    if (!node) return;
    if (!node.IsMap()) {
      fail(where.empty() ? "<root>" : where, "expected a mapping");
      return;
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
      const auto k = kv.first.as<std::string>();
      if (!ok.count(k)) fail(where.empty() ? k : where + "." + k, "unknown key");
    }
  }

  template <class T>
  void get(const YAML::Node& node, const char* name, const std::string& where, T& out) {
    if (!node || !node.IsMap() || !node[name]) return;
    try {
      out = node[name].as<T>();
    } catch (const YAML::Exception&) {
      fail(where + "." + name, "malformed value");
    }
  }

  void get_vec2(const YAML::Node& node, const char* name, const std::string& where, Vec2d& out) {
    if (!node || !node.IsMap() || !node[name]) return;
    const auto v = node[name];
    try {
      if (!v.IsSequence() || v.size() != 2) throw YAML::Exception(YAML::Mark(), "");
      out = Vec2d(v[0].as<double>(), v[1].as<double>());
    } catch (const YAML::Exception&) {
      fail(where + "." + name, "expected a list of two numbers");
    }
  }

  void get_spinor(const YAML::Node& node, const char* name, const std::string& where,
                  Vector2c& out) {
    if (!node || !node.IsMap() || !node[name]) return;
    const auto v = node[name];
    try {
      if (!v.IsSequence() || v.size() != 2) throw YAML::Exception(YAML::Mark(), "");
      for (std::size_t i = 0; i < 2; ++i) {
        if (v[i].IsSequence()) {
          if (v[i].size() != 2) throw YAML::Exception(YAML::Mark(), "");
          out(static_cast<Eigen::Index>(i)) = cplx(v[i][0].as<double>(), v[i][1].as<double>());
        } else {
          out(static_cast<Eigen::Index>(i)) = cplx(v[i].as<double>(), 0.0);
        }
      }
    } catch (const YAML::Exception&) {
      fail(where + "." + name, "expected two entries, each a number or [re, im]");
    }
  }

  void get_annulus(const YAML::Node& node, const std::string& where, Annulus& out) {
    check_keys(node, where, {"lo", "hi", "N"});
    if (!node) {
      fail(where, "missing");
      return;
    }
    if (node["N"]) {
      double N = 0.0;
      get(node, "N", where, N);
      if (!(N > 0.0)) fail(where + ".N", "must be positive");
      else out = Annulus::dyadic(N);
      if (node["lo"] || node["hi"]) fail(where, "give either N or lo/hi, not both");
      return;
    }
    get(node, "lo", where, out.lo);
    get(node, "hi", where, out.hi);
  }
};

YAML::Node parse_yaml(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: YAML syntax error: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p);
  if (!is) throw ConfigError("config: cannot open " + p.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

[[noreturn]] void throw_all(const std::vector<std::string>& errs) {
  std::string msg = "invalid configuration:";
  for (const auto& e : errs) msg += "\n  " + e;
  throw ConfigError(msg);
}

bool is_power_of_two(double N) {
  if (!(N > 0.0) || !std::isfinite(N)) return false;
  int e = 0;
  return std::frexp(N, &e) == 0.5;
}

}  // namespace

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> e;
  auto bad = [&](const std::string& k, const std::string& w) { e.push_back(k + ": " + w); };

  const bool grid_ok = c.grid.n >= 16 && c.grid.n % 2 == 0 && c.grid.n <= 8192;
  if (!grid_ok) bad("grid.n", "must be an even integer in [16, 8192]");
  if (!(c.grid.L > 0.0) || !std::isfinite(c.grid.L)) bad("grid.L", "must be positive and finite");

  const auto& p = c.physics;
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) bad("physics.lambda", "must be positive");
  if (!(p.init.epsilon >= 0.0) || !std::isfinite(p.init.epsilon))
    bad("physics.epsilon", "must be nonnegative and finite");
  if (!(p.init.width > 0.0) || !std::isfinite(p.init.width)) bad("physics.width", "must be positive");
  if (!p.init.carrier.allFinite()) bad("physics.k0", "must be finite");
  if (!(p.init.direction.norm() > 0.0) || !std::isfinite(p.init.direction.norm()))
    bad("physics.v", "must be a nonzero finite spinor");

  const auto& t = c.time;
  const bool dt_ok = t.dt > 0.0 && std::isfinite(t.dt);
  if (!dt_ok) bad("time.dt", "must be positive");
  if (!(t.t_end > 0.0) || !std::isfinite(t.t_end)) bad("time.t_end", "must be positive");
  if (!(t.sample_interval > 0.0)) bad("time.sample_interval", "must be positive");
  else if (dt_ok) {
    const double r = t.sample_interval / t.dt;
    if (r < 1.0 - 1e-9 || std::abs(r - std::round(r)) > 1e-9 * r)
      bad("time.sample_interval", "must be a positive integer multiple of time.dt");
    const double s = t.t_end / t.sample_interval;
    if (std::abs(s - std::round(s)) > 1e-9 * std::max(1.0, s))
      bad("time.t_end", "must be an integer multiple of time.sample_interval");
  }
  if (t.max_halvings < 0 || t.max_halvings > 20) bad("time.max_halvings", "must lie in [0, 20]");

  const auto& d = c.diagnostics;
  if (grid_ok && c.grid.L > 0.0) {
    const Grid g(c.grid.n, c.grid.L);
    for (double N : d.tracked_N)
      if (!is_power_of_two(N) || N < g.band_low() || N > g.band_high())
        bad("diagnostics.tracked_N", "value " + format_dyadic(N) +
                                         " is not a power of two inside the resolvable band");
    const double kc = g.dealias_cutoff_index() * g.mode_spacing();
    if (std::abs(p.init.carrier(0)) >= kc || std::abs(p.init.carrier(1)) >= kc)
      bad("physics.k0", "carrier lies outside the dealiased band");
    if (p.init.width > 0.0 && !c.diagnostics.allow_past_horizon && t.t_end > c.horizon())
      bad("time.t_end", "exceeds the wrap-around horizon L/2 - 4w = " + std::to_string(c.horizon()) +
                            " (set diagnostics.allow_past_horizon to override)");
  }
  for (int k : d.tracked_k)
    if (k < 0 || k > 7) bad("diagnostics.tracked_k", "entries must lie in 0..7");
  if (!(d.high_s >= 0.0)) bad("diagnostics.high_s", "must be nonnegative");
  if (!(d.fit_t_a > 0.0) || !(d.fit_t_b > d.fit_t_a))
    bad("diagnostics.fit_window", "need 0 < t_a < t_b");
  else if (d.fit_t_b > t.t_end)
    bad("diagnostics.fit_window", "window ends after time.t_end");
  if (!(d.gamma > 0.0 && d.gamma < 1.0)) bad("diagnostics.gamma", "must lie in (0, 1)");
  if (!(d.delta > 0.0 && d.delta < 1.0)) bad("diagnostics.delta", "must lie in (0, 1)");
  for (double s : d.scattering_times)
    if (!(s > 0.0) || 2.0 * s > t.t_end + 1e-9)
      bad("diagnostics.scattering_times", "each t needs 0 < t and 2t <= time.t_end");
  if (dt_ok && t.sample_interval > 0.0)
    for (double s : d.scattering_times) {
      const double r = s / t.sample_interval;
      if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r))
        bad("diagnostics.scattering_times", "each t must be a multiple of time.sample_interval");
    }

  if (c.output.directory.empty()) bad("output.directory", "must not be empty");
  if (!(c.output.checkpoint_interval >= 0.0)) bad("output.checkpoint_interval", "must be nonnegative");
  return e;
}

std::vector<std::string> validate(const ResonanceConfig& c) {
  std::vector<std::string> e;
  auto bad = [&](const std::string& k, const std::string& w) { e.push_back(k + ": " + w); };
  if (c.signatures.empty()) bad("resonance.signatures", "must not be empty");
  if (c.cells.empty()) bad("resonance.cells", "must not be empty");
  if (c.n_samples < kMinResonanceSamples)
    bad("resonance.n_samples", "must be at least " + std::to_string(kMinResonanceSamples));
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    const auto& cell = c.cells[i];
    const std::string w = "resonance.cells[" + std::to_string(i) + "]";
    auto chk = [&](const Annulus& a, const std::string& k) {
      if (!(a.lo >= 0.0) || !(a.hi > a.lo) || !std::isfinite(a.hi)) bad(w + "." + k, "need 0 <= lo < hi");
    };
    chk(cell.xi, "xi");
    chk(cell.eta, "eta");
    if (cell.kind == PhaseKind::Trilinear) chk(cell.sigma, "sigma");
    for (const auto& con : cell.constraints) chk(con.range, "constraints");
  }
  for (std::size_t i = 0; i < c.heatmaps.size(); ++i) {
    const auto& h = c.heatmaps[i];
    const std::string w = "resonance.heatmaps[" + std::to_string(i) + "]";
    if (h.points < 2 || h.points > 2001) bad(w + ".points", "must lie in [2, 2001]");
    if (!(h.half_width > 0.0)) bad(w + ".half_width", "must be positive");
    if (h.file.empty()) bad(w + ".file", "must not be empty");
  }
  for (const auto& cell : c.case_one_cells)
    if (!(cell.n0 > 0.0 && cell.n1 > 0.0 && cell.n2 > 0.0) || !(cell.n0 < cell.n1))
      bad("resonance.cm.case_one", "need 0 < N0 < N1 and N2 > 0");
  if (c.cm_points < 4 || c.cm_points % 2 != 0) bad("resonance.cm.points", "must be an even integer >= 4");
  else {
    try {
      check_cm_budget({SlotGrid{c.cm_points, 1.0}, SlotGrid{c.cm_points, 1.0}});
    } catch (const MemoryGuardError& ex) {
      bad("resonance.cm.points", ex.what());
    }
  }
  if (c.directory.empty()) bad("output.directory", "must not be empty");
  return e;
}

RunConfig parse_run_config(const std::string& yaml_text) {
  const YAML::Node root = parse_yaml(yaml_text);
  RunConfig c;
  Reader r;
  if (root && !root.IsNull()) {
    r.check_keys(root, "", {"grid", "physics", "time", "diagnostics", "output", "seed"});
    const auto g = root["grid"], p = root["physics"], t = root["time"], d = root["diagnostics"],
               o = root["output"];
    r.check_keys(g, "grid", {"n", "L"});
    r.get(g, "n", "grid", c.grid.n);
    r.get(g, "L", "grid", c.grid.L);

    r.check_keys(p, "physics", {"lambda", "epsilon", "width", "k0", "v", "nonlinear"});
    r.get(p, "lambda", "physics", c.physics.lambda);
    r.get(p, "epsilon", "physics", c.physics.init.epsilon);
    r.get(p, "width", "physics", c.physics.init.width);
    r.get_vec2(p, "k0", "physics", c.physics.init.carrier);
    r.get_spinor(p, "v", "physics", c.physics.init.direction);
    r.get(p, "nonlinear", "physics", c.physics.nonlinear);

    r.check_keys(t, "time", {"dt", "t_end", "sample_interval", "max_halvings"});
    r.get(t, "dt", "time", c.time.dt);
    r.get(t, "t_end", "time", c.time.t_end);
    r.get(t, "sample_interval", "time", c.time.sample_interval);
    r.get(t, "max_halvings", "time", c.time.max_halvings);

    r.check_keys(d, "diagnostics", {"tracked_N", "tracked_k", "high_s", "fit_window", "gamma",
                                    "delta", "scattering_times", "allow_past_horizon"});
    r.get(d, "tracked_N", "diagnostics", c.diagnostics.tracked_N);
    r.get(d, "tracked_k", "diagnostics", c.diagnostics.tracked_k);
    r.get(d, "high_s", "diagnostics", c.diagnostics.high_s);
    Vec2d window(c.diagnostics.fit_t_a, c.diagnostics.fit_t_b);
    r.get_vec2(d, "fit_window", "diagnostics", window);
    c.diagnostics.fit_t_a = window(0);
    c.diagnostics.fit_t_b = window(1);
    r.get(d, "gamma", "diagnostics", c.diagnostics.gamma);
    r.get(d, "delta", "diagnostics", c.diagnostics.delta);
    r.get(d, "scattering_times", "diagnostics", c.diagnostics.scattering_times);
    r.get(d, "allow_past_horizon", "diagnostics", c.diagnostics.allow_past_horizon);

    r.check_keys(o, "output", {"directory", "formats", "checkpoint_interval"});
    std::string dir = c.output.directory.string();
    r.get(o, "directory", "output", dir);
    c.output.directory = dir;
    if (o && o.IsMap() && o["formats"]) {
      std::vector<std::string> formats;
      r.get(o, "formats", "output", formats);
      c.output.csv = c.output.json = c.output.snapshots = false;
      for (const auto& f : formats) {
        if (f == "csv") c.output.csv = true;
        else if (f == "json") c.output.json = true;
        else if (f == "snapshots") c.output.snapshots = true;
        else r.fail("output.formats", "unknown format '" + f + "' (csv, json, snapshots)");
      }
    }
    r.get(o, "checkpoint_interval", "output", c.output.checkpoint_interval);
    if (root["seed"]) {
      try {
        c.seed = root["seed"].as<std::uint64_t>();
      } catch (const YAML::Exception&) {
        r.fail("seed", "must be a nonnegative integer");
      }
    }
  }
  auto errs = r.errors;
  for (auto& e : validate(c)) errs.push_back(std::move(e));
  if (!errs.empty()) throw_all(errs);
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_file(path));
}

ResonanceConfig parse_resonance_config(const std::string& yaml_text) {
  const YAML::Node root = parse_yaml(yaml_text);
  ResonanceConfig c;
  Reader r;
  if (!root || !root.IsMap() || !root["resonance"]) throw_all({"resonance: section missing"});
  r.check_keys(root, "", {"resonance", "output"});
  const auto res = root["resonance"];
  r.check_keys(res, "resonance", {"signatures", "convention", "n_samples", "seed", "cells",
                                  "heatmaps", "cm"});

  if (res["signatures"]) {
    const auto s = res["signatures"];
    if (s.IsScalar() && s.as<std::string>() == "all") {
      const auto all = PhaseSignature::all();
      c.signatures.assign(all.begin(), all.end());
    } else if (s.IsSequence()) {
      for (const auto& item : s) {
        try {
          c.signatures.push_back(PhaseSignature::parse(item.as<std::string>()));
        } catch (const std::exception& ex) {
          r.fail("resonance.signatures", ex.what());
        }
      }
    } else {
      r.fail("resonance.signatures", "expected 'all' or a list of labels such as \"+-+-\"");
    }
  }
  std::string conv = "minus";
  r.get(res, "convention", "resonance", conv);
  if (conv == "minus") c.convention = PhaseConvention::Minus;
  else if (conv == "plus") c.convention = PhaseConvention::Plus;
  else r.fail("resonance.convention", "must be 'minus' or 'plus'");
  r.get(res, "n_samples", "resonance", c.n_samples);
  if (res["seed"]) {
    try {
      c.seed = res["seed"].as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      r.fail("resonance.seed", "must be a nonnegative integer");
    }
  }

  if (res["cells"]) {
    if (!res["cells"].IsSequence()) r.fail("resonance.cells", "expected a list");
    else {
      int i = 0;
      for (const auto& node : res["cells"]) {
        const std::string w = "resonance.cells[" + std::to_string(i++) + "]";
        r.check_keys(node, w, {"label", "kind", "xi", "eta", "sigma", "constraints"});
        ResonanceCell cell;
        r.get(node, "label", w, cell.label);
        std::string kind = "trilinear";
        r.get(node, "kind", w, kind);
        if (kind == "trilinear") cell.kind = PhaseKind::Trilinear;
        else if (kind == "bilinear") cell.kind = PhaseKind::Bilinear;
        else r.fail(w + ".kind", "must be 'trilinear' or 'bilinear'");
        r.get_annulus(node["xi"], w + ".xi", cell.xi);
        r.get_annulus(node["eta"], w + ".eta", cell.eta);
        if (cell.kind == PhaseKind::Trilinear) r.get_annulus(node["sigma"], w + ".sigma", cell.sigma);
        if (node["constraints"]) {
          int j = 0;
          for (const auto& con : node["constraints"]) {
            const std::string cw = w + ".constraints[" + std::to_string(j++) + "]";
            Constraint k{Combination::XiMinusEta, {}};
            std::string of;
            r.get(con, "of", cw, of);
            try {
              k.which = parse_combination(of);
            } catch (const std::exception& ex) {
              r.fail(cw + ".of", ex.what());
            }
            YAML::Node range = YAML::Clone(con);
            range.remove("of");
            r.get_annulus(range, cw, k.range);
            cell.constraints.push_back(k);
          }
        }
        if (cell.label.empty()) cell.label = "cell" + std::to_string(i - 1);
        c.cells.push_back(cell);
      }
    }
  }

  if (res["heatmaps"]) {
    int i = 0;
    for (const auto& node : res["heatmaps"]) {
      const std::string w = "resonance.heatmaps[" + std::to_string(i++) + "]";
      r.check_keys(node, w, {"signature", "xi", "sigma", "half_width", "points", "file"});
      HeatmapRequest h;
      std::string label = "++++";
      r.get(node, "signature", w, label);
      try {
        h.signature = PhaseSignature::parse(label);
      } catch (const std::exception& ex) {
        r.fail(w + ".signature", ex.what());
      }
      r.get_vec2(node, "xi", w, h.xi);
      r.get_vec2(node, "sigma", w, h.sigma);
      r.get(node, "half_width", w, h.half_width);
      r.get(node, "points", w, h.points);
      h.file = "heatmap_" + std::to_string(i - 1) + ".csv";
      r.get(node, "file", w, h.file);
      c.heatmaps.push_back(h);
    }
  }

  if (const auto cm = res["cm"]) {
    r.check_keys(cm, "resonance.cm", {"points", "case_one"});
    r.get(cm, "points", "resonance.cm", c.cm_points);
    if (cm["case_one"]) {
      int i = 0;
      for (const auto& node : cm["case_one"]) {
        const std::string w = "resonance.cm.case_one[" + std::to_string(i++) + "]";
        r.check_keys(node, w, {"N0", "N1", "N2"});
        CaseOneCell cell;
        r.get(node, "N0", w, cell.n0);
        r.get(node, "N1", w, cell.n1);
        r.get(node, "N2", w, cell.n2);
        c.case_one_cells.push_back(cell);
      }
    }
  }

  if (const auto o = root["output"]) {
    r.check_keys(o, "output", {"directory"});
    std::string dir = c.directory.string();
    r.get(o, "directory", "output", dir);
    c.directory = dir;
  }

  auto errs = r.errors;
  for (auto& e : validate(c)) errs.push_back(std::move(e));
  if (!errs.empty()) throw_all(errs);
  return c;
}

ResonanceConfig load_resonance_config(const std::filesystem::path& path) {
  return parse_resonance_config(read_file(path));
}

ConfigKind detect_config_kind(const std::filesystem::path& path) {
  const YAML::Node root = parse_yaml(read_file(path));
  return root && root.IsMap() && root["resonance"] ? ConfigKind::Resonance : ConfigKind::Run;
}

std::filesystem::path output_directory(const std::filesystem::path& configured) {
  const char* env = std::getenv("CSPD_OUTPUT_DIR");
  if (env && *env) return env;
  return configured;
}

}  // namespace cspd
