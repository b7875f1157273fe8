#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include <doctest.h>
#include <json.hpp>

#include "cspd/config.hpp"
#include "cspd/errors.hpp"
#include "cspd/runner.hpp"
#include "cspd/snapshot.hpp"
#include "support.hpp"

using namespace cspd;
namespace fs = std::filesystem;

namespace {

// Removed on destruction; also clears any output override.
struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& name)
      : path(fs::temp_directory_path() / ("cspd_runner_" + name + "_" + std::to_string(::getpid()))) {
    ::unsetenv("CSPD_OUTPUT_DIR");
    fs::remove_all(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
};

// n = 64 on a box of side 40: band [0.157, 5.03], horizon 14 for width 1.5.
RunConfig small_config(const fs::path& dir) {
  RunConfig c;
  c.grid.n = 64;
  c.grid.L = 40.0;
  c.physics.init.epsilon = 0.05;
  c.physics.init.width = 1.5;
  c.time.dt = 0.05;
  c.time.t_end = 4.0;
  c.time.sample_interval = 0.5;
  c.diagnostics.fit_t_a = 1.0;
  c.diagnostics.fit_t_b = 4.0;
  c.diagnostics.scattering_times = {1.0, 2.0};
  c.output.directory = dir;
  c.output.checkpoint_interval = 2.0;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int count_lines(const fs::path& p) {
  std::ifstream is(p);
  int n = 0;
  for (std::string line; std::getline(is, line);) ++n;
  return n;
}

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("zero amplitude gives identically zero diagnostics") {
  ScratchDir dir("zero");
  auto c = small_config(dir.path);
  c.physics.init.epsilon = 0.0;
  const RunSummary s = run_simulation(c);
  REQUIRE(s.records.size() == 9);
  for (const auto& r : s.records) {
    CHECK(r.mass == 0.0);
    CHECK(r.h0 == 0.0);
    CHECK(r.h_high == 0.0);
    CHECK(r.weighted_plus == 0.0);
    for (double v : r.sup) CHECK(v == 0.0);
    for (double v : r.bilinear) CHECK(v == 0.0);
    for (double v : r.time_derivative) CHECK(v == 0.0);
  }
  for (const auto& e : s.scattering) CHECK(e.combined == 0.0);
  CHECK(s.halvings == 0);
  CHECK(s.dt_used == 0.05);
}

TEST_CASE("linear flow keeps profiles fixed") {
  ScratchDir dir("linear");
  auto c = small_config(dir.path);
  c.physics.nonlinear = false;
  c.physics.init.epsilon = 0.5;
  const RunSummary s = run_simulation(c);
  CHECK(s.max_mass_drift < 1e-13);
  for (const auto& e : s.scattering) CHECK(e.combined < 1e-13);
  const ProfileState initial = make_initial_state(Grid(64, 40.0), c.physics.init);
  CHECK(testing::max_abs_diff(s.final_state.f_plus, initial.f_plus) < 1e-15);
  CHECK(testing::max_abs_diff(s.final_state.f_minus, initial.f_minus) < 1e-15);
}

TEST_CASE("nonlinear run writes every output") {
  ScratchDir dir("outputs");
  const auto c = small_config(dir.path);
  const RunSummary s = run_simulation(c);
  CHECK(s.directory == dir.path);
  for (const char* f : {"diagnostics.csv", "summary.json", "psi_initial.cspd", "psi_final.cspd",
                        "gauge_final.cspd", "checkpoint_meta.json", "checkpoint_fplus.cspd",
                        "checkpoint_fminus.cspd"})
    CHECK_MESSAGE(fs::exists(dir.path / f), f);

  CHECK(s.max_mass_drift < 1e-10);
  CHECK(s.max_mass_drift > 0.0);
  CHECK(count_lines(dir.path / "diagnostics.csv") == 10);
  std::ifstream csv(dir.path / "diagnostics.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(std::count(header.begin(), header.end(), ',') + 1 == static_cast<long>(s.columns.size()));
  CHECK(header.rfind("t,mass,", 0) == 0);

  const auto j = nlohmann::json::parse(slurp(dir.path / "summary.json"));
  CHECK(j["samples"] == 9);
  CHECK(j["config"]["grid"]["n"] == 64);
  CHECK(j["horizon"].get<double>() == doctest::Approx(14.0));
  CHECK(j["fits"].size() == 8);
  CHECK(j["scattering"].size() == 2);
  CHECK(j["scattering"][1]["t2"] == 4.0);
  CHECK(j["envelopes"].contains("sup_max"));
  CHECK(j["envelopes"].contains("bilinear_m_mu2_N4"));
  CHECK(j["envelopes"].contains("dtf_p_N0.25"));
  CHECK(j["residual_maxima"]["mass_drift"].get<double>() == s.max_mass_drift);

  const auto [state, meta] = read_checkpoint(dir.path / "checkpoint");
  CHECK(meta.t == 4.0);
  CHECK(meta.n == 64);
  CHECK(meta.dt == 0.05);
  CHECK(testing::max_abs_diff(state.f_plus, s.final_state.f_plus) == 0.0);
  CHECK(testing::max_abs_diff(state.f_minus, s.final_state.f_minus) == 0.0);

  const Snapshot gauge = read_snapshot(dir.path / "gauge_final.cspd");
  CHECK(gauge.components.size() == 3);
  CHECK(gauge.grid.n() == 64);
}

TEST_CASE("runs are reproducible to the byte") {
  ScratchDir a("repro_a"), b("repro_b");
  run_simulation(small_config(a.path));
  run_simulation(small_config(b.path));
  const std::string ca = slurp(a.path / "diagnostics.csv");
  CHECK_FALSE(ca.empty());
  CHECK(ca == slurp(b.path / "diagnostics.csv"));
  CHECK(slurp(a.path / "psi_final.cspd") == slurp(b.path / "psi_final.cspd"));
}

TEST_CASE("output formats can be switched off") {
  ScratchDir dir("formats");
  auto c = small_config(dir.path);
  c.output.csv = false;
  c.output.snapshots = false;
  c.output.checkpoint_interval = 0.0;
  run_simulation(c);
  CHECK(fs::exists(dir.path / "summary.json"));
  CHECK_FALSE(fs::exists(dir.path / "diagnostics.csv"));
  CHECK_FALSE(fs::exists(dir.path / "psi_final.cspd"));
  CHECK_FALSE(fs::exists(dir.path / "checkpoint_meta.json"));
}

TEST_CASE("environment override redirects output") {
  ScratchDir configured("configured"), redirected("redirected");
  ::setenv("CSPD_OUTPUT_DIR", redirected.path.c_str(), 1);
  auto c = small_config(configured.path);
  c.time.t_end = 2.0;
  c.diagnostics.fit_t_b = 2.0;
  c.diagnostics.scattering_times = {1.0};
  const RunSummary s = run_simulation(c);
  ::unsetenv("CSPD_OUTPUT_DIR");
  CHECK(s.directory == redirected.path);
  CHECK(fs::exists(redirected.path / "summary.json"));
  CHECK_FALSE(fs::exists(configured.path));
}

TEST_CASE("invalid config fails before any output") {
  ScratchDir dir("invalid");
  auto c = small_config(dir.path);
  c.time.dt = -1.0;
  CHECK_THROWS_AS(run_simulation(c), ConfigError);
  CHECK_FALSE(fs::exists(dir.path));
}

TEST_CASE("divergence keeps the last good checkpoint") {
  ScratchDir dir("diverge");
  auto c = small_config(dir.path);
  c.physics.init.epsilon = 1e60;
  c.time.dt = 0.5;
  c.time.max_halvings = 1;
  try {
    run_simulation(c);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.stage >= 1);
    CHECK(e.stage <= 4);
  }
  REQUIRE(fs::exists(dir.path / "checkpoint_meta.json"));
  const auto [state, meta] = read_checkpoint(dir.path / "checkpoint");
  CHECK(meta.t == 0.0);
  CHECK(meta.dt == 0.25);
  CHECK(std::isfinite(testing::max_abs(state.f_plus)));
  CHECK(count_lines(dir.path / "diagnostics.csv") == 2);
}

TEST_CASE("resonance report outputs") {
  ScratchDir dir("resonance");
  const ResonanceConfig c = parse_resonance_config(R"(
resonance:
  signatures: ["+-+-", "++++"]
  n_samples: 1000
  seed: 3
  cells:
    - {label: one, xi: {N: 1}, eta: {N: 1}, sigma: {N: 1}}
  heatmaps:
    - {signature: "+-+-", xi: [0.5, 0], sigma: [1, 0], half_width: 2, points: 11, file: map.csv}
  cm: {points: 16, case_one: [{N0: 0.25, N1: 2, N2: 2}]}
output:
  directory: )" + dir.path.string() + "\n");
  const ResonanceOutput out = run_resonance_report(c);
  REQUIRE(out.reports.size() == 2);
  CHECK(out.reports[0].minima.samples == 1000);

  const auto arr = nlohmann::json::parse(slurp(dir.path / "resonance.json"));
  REQUIRE(arr.is_array());
  REQUIRE(arr.size() == 2);
  CHECK(arr[0]["signature"] == "+-+-");
  CHECK(arr[0]["cell"]["label"] == "one");
  CHECK(arr[0]["convention"] == "minus");
  CHECK(arr[0]["samples"] == 1000);
  CHECK(arr[0]["min_abs_phi01"].get<double>() >= 2.0);
  CHECK(arr[0]["time_nonresonant"] == true);
  CHECK(arr[1]["resonant"] == true);

  const auto sum = nlohmann::json::parse(slurp(dir.path / "resonance_summary.json"));
  CHECK(sum["signature_table"].size() == 16);
  CHECK(sum["cm"]["unit_multiplier"].get<double>() == 1.0);
  CHECK(sum["cm"]["case_one"].size() == 1);
  CHECK(sum["cm"]["case_one_constant"].get<double>() > 0.0);

  REQUIRE(out.heatmaps.size() == 1);
  CHECK(out.heatmaps[0] == dir.path / "map.csv");
  CHECK(count_lines(dir.path / "map.csv") == 11 * 11 + 1);

  // Same seed, same report.
  const auto first = slurp(dir.path / "resonance.json");
  run_resonance_report(c);
  CHECK(slurp(dir.path / "resonance.json") == first);
}

}  // TEST_SUITE
