#include <cstdlib>
#include <filesystem>
#include <string>

#include <doctest.h>

#include "cspd/config.hpp"
#include "cspd/errors.hpp"

using namespace cspd;

namespace {

const std::filesystem::path kSource = CSPD_SOURCE_DIR;

std::string config_error(const std::string& yaml) {
  try {
    parse_run_config(yaml);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::string resonance_error(const std::string& yaml) {
  try {
    parse_resonance_config(yaml);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool has(const std::string& text, const std::string& what) { return text.find(what) != std::string::npos; }

}  // namespace

TEST_SUITE("config") {

TEST_CASE("default file parses to the documented values") {
  const RunConfig c = load_run_config(kSource / "configs" / "default.yaml");
  CHECK(c.grid.n == 512);
  CHECK(c.grid.L == 100.0);
  CHECK(c.physics.lambda == 1.0);
  CHECK(c.physics.init.epsilon == 0.01);
  CHECK(c.physics.init.width == 2.0);
  CHECK(c.physics.init.carrier.norm() == 0.0);
  CHECK(c.physics.init.direction(0) == cplx(1.0, 0.0));
  CHECK(c.physics.init.direction(1) == cplx(0.0, 0.0));
  CHECK(c.physics.nonlinear);
  CHECK(c.time.dt == 0.02);
  CHECK(c.time.t_end == 40.0);
  CHECK(c.time.sample_interval == 0.5);
  CHECK(c.diagnostics.tracked_N == std::vector<double>{0.25, 1.0, 4.0});
  CHECK(c.diagnostics.tracked_k.size() == 8);
  CHECK(c.diagnostics.fit_t_a == 10.0);
  CHECK(c.diagnostics.fit_t_b == 35.0);
  CHECK(c.diagnostics.scattering_times == std::vector<double>{5.0, 10.0, 20.0});
  CHECK(c.output.csv);
  CHECK(c.output.json);
  CHECK(c.output.snapshots);
  CHECK(c.output.checkpoint_interval == 10.0);
  // L / 2 - 4 w
  CHECK(c.horizon() == doctest::Approx(42.0));
  CHECK(validate(c).empty());
}

TEST_CASE("wide-box file differs from the default only in box and outputs") {
  const RunConfig d = load_run_config(kSource / "configs" / "default.yaml");
  const RunConfig c = load_run_config(kSource / "configs" / "scattering.yaml");
  CHECK(c.grid.n == 512);
  CHECK(c.grid.L == 200.0);
  CHECK(c.physics.init.epsilon == d.physics.init.epsilon);
  CHECK(c.physics.init.width == d.physics.init.width);
  CHECK(c.time.dt == d.time.dt);
  CHECK(c.time.t_end == d.time.t_end);
  CHECK(c.diagnostics.scattering_times == d.diagnostics.scattering_times);
  CHECK_FALSE(c.output.snapshots);
  // Radiation in the profile reaches radius about 2t, which must stay inside the box.
  CHECK(2.0 * c.time.t_end + 4.0 * c.physics.init.width < c.grid.L / 2.0);
  CHECK(validate(c).empty());
}

TEST_CASE("empty document yields the built-in defaults") {
  const RunConfig c = parse_run_config("");
  const RunConfig d;
  CHECK(c.grid.n == d.grid.n);
  CHECK(c.time.dt == d.time.dt);
  CHECK(validate(d).empty());
}

TEST_CASE("inline overrides and complex spinor entries") {
  const RunConfig c = parse_run_config(R"(
grid: {n: 64, L: 40}
physics: {lambda: 0.5, epsilon: 0.2, width: 1.5, k0: [0.5, -0.25], v: [[1, 2], 0.5]}
time: {dt: 0.05, t_end: 10, sample_interval: 1}
diagnostics: {tracked_N: [1], tracked_k: [0, 3], fit_window: [2, 9], scattering_times: [2, 5]}
output: {directory: somewhere, formats: [json], checkpoint_interval: 0}
seed: 12
)");
  CHECK(c.grid.n == 64);
  CHECK(c.physics.lambda == 0.5);
  CHECK(c.physics.init.carrier(1) == -0.25);
  CHECK(c.physics.init.direction(0) == cplx(1.0, 2.0));
  CHECK(c.physics.init.direction(1) == cplx(0.5, 0.0));
  CHECK_FALSE(c.output.csv);
  CHECK(c.output.json);
  CHECK_FALSE(c.output.snapshots);
  CHECK(c.output.directory == "somewhere");
  CHECK(c.seed == 12);
  CHECK(c.horizon() == doctest::Approx(14.0));
}

TEST_CASE("every violation is reported with its key") {
  const std::string e = config_error(R"(
grid: {n: 63, L: -1}
physics: {lambda: 0, width: 0, colour: red}
time: {dt: 0}
diagnostics: {gamma: 1.5, tracked_k: [9]}
)");
  REQUIRE_FALSE(e.empty());
  CHECK(has(e, "grid.n:"));
  CHECK(has(e, "grid.L:"));
  CHECK(has(e, "physics.lambda:"));
  CHECK(has(e, "physics.width:"));
  CHECK(has(e, "physics.colour: unknown key"));
  CHECK(has(e, "time.dt:"));
  CHECK(has(e, "diagnostics.gamma:"));
  CHECK(has(e, "diagnostics.tracked_k:"));
}

TEST_CASE("time grid consistency") {
  CHECK(has(config_error("time: {dt: 0.03, sample_interval: 0.5}"), "time.sample_interval:"));
  CHECK(has(config_error("time: {t_end: 40.25}"), "time.t_end:"));
  CHECK(has(config_error("time: {dt: -0.02}"), "time.dt:"));
  CHECK(has(config_error("time: {max_halvings: 30}"), "time.max_halvings:"));
}

TEST_CASE("horizon is enforced unless explicitly allowed") {
  const std::string e = config_error("time: {t_end: 45}\ndiagnostics: {fit_window: [10, 35]}");
  CHECK(has(e, "time.t_end: exceeds the wrap-around horizon"));
  CHECK_NOTHROW(parse_run_config("time: {t_end: 45}\ndiagnostics: {allow_past_horizon: true}"));
}

TEST_CASE("tracked scales must be resolvable powers of two") {
  CHECK(has(config_error("diagnostics: {tracked_N: [3]}"), "diagnostics.tracked_N:"));
  // The band starts at 2 pi / 100, just above 1/16.
  CHECK(has(config_error("diagnostics: {tracked_N: [0.0625]}"), "diagnostics.tracked_N:"));
  CHECK(has(config_error("diagnostics: {tracked_N: [128]}"), "diagnostics.tracked_N:"));
  CHECK_NOTHROW(parse_run_config("diagnostics: {tracked_N: [0.125, 8]}"));
}

TEST_CASE("carrier outside the dealiased band is rejected") {
  // Dealias cutoff on n = 512, L = 100 is 128 * 2 pi / 100, about 8.04.
  CHECK(has(config_error("physics: {k0: [8.1, 0]}"), "physics.k0:"));
  CHECK_NOTHROW(parse_run_config("physics: {k0: [7.9, 0]}"));
}

TEST_CASE("malformed values, formats and scattering times") {
  CHECK(has(config_error("grid: {n: many}"), "grid.n: malformed value"));
  CHECK(has(config_error("physics: {v: [1]}"), "physics.v:"));
  CHECK(has(config_error("physics: {v: [0, 0]}"), "physics.v:"));
  CHECK(has(config_error("output: {formats: [xml]}"), "output.formats:"));
  CHECK(has(config_error("diagnostics: {scattering_times: [25]}"), "diagnostics.scattering_times:"));
  CHECK(has(config_error("diagnostics: {scattering_times: [5.2]}"), "diagnostics.scattering_times:"));
  CHECK(has(config_error("diagnostics: {fit_window: [30, 20]}"), "diagnostics.fit_window:"));
  CHECK(has(config_error("seed: -3"), "seed:"));
  CHECK(has(config_error("grid: [1, 2"), "YAML syntax error"));
  CHECK(has(config_error("surprise: 1"), "surprise: unknown key"));
}

TEST_CASE("missing file is a ConfigError") {
  CHECK_THROWS_AS(load_run_config(kSource / "configs" / "does_not_exist.yaml"), ConfigError);
}

TEST_CASE("bad fixture collects three errors") {
  try {
    load_run_config(kSource / "tests" / "data" / "bad_run.yaml");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string m = e.what();
    CHECK(has(m, "grid.n:"));
    CHECK(has(m, "time.dt:"));
    CHECK(has(m, "physics.colour:"));
  }
}

TEST_CASE("output directory override from the environment") {
  ::unsetenv("CSPD_OUTPUT_DIR");
  CHECK(output_directory("a/b") == "a/b");
  ::setenv("CSPD_OUTPUT_DIR", "", 1);
  CHECK(output_directory("a/b") == "a/b");
  ::setenv("CSPD_OUTPUT_DIR", "/tmp/elsewhere", 1);
  CHECK(output_directory("a/b") == "/tmp/elsewhere");
  ::unsetenv("CSPD_OUTPUT_DIR");
}

TEST_CASE("config kind detection") {
  CHECK(detect_config_kind(kSource / "configs" / "default.yaml") == ConfigKind::Run);
  CHECK(detect_config_kind(kSource / "configs" / "resonance.yaml") == ConfigKind::Resonance);
}

TEST_CASE("resonance file parses") {
  const ResonanceConfig c = load_resonance_config(kSource / "configs" / "resonance.yaml");
  CHECK(c.signatures.size() == 16);
  CHECK(c.signatures.front().label() == "++++");
  CHECK(c.convention == PhaseConvention::Minus);
  CHECK(c.n_samples == 10000);
  CHECK(c.seed == 7);
  REQUIRE(c.cells.size() == 4);
  CHECK(c.cells[0].label == "low_output");
  CHECK(c.cells[0].xi.lo == 0.125);
  CHECK(c.cells[0].xi.hi == 0.5);
  const auto& bil = c.cells[3];
  CHECK(bil.kind == PhaseKind::Bilinear);
  REQUIRE(bil.constraints.size() == 1);
  CHECK(bil.constraints[0].which == Combination::XiPlusEta);
  CHECK(bil.constraints[0].range.lo == 2.0);
  CHECK(bil.constraints[0].range.hi == 8.0);
  REQUIRE(c.heatmaps.size() == 1);
  CHECK(c.heatmaps[0].signature.label() == "+-+-");
  CHECK(c.heatmaps[0].points == 101);
  CHECK(c.heatmaps[0].file == "heatmap_pmpm.csv");
  CHECK(c.cm_points == 32);
  REQUIRE(c.case_one_cells.size() == 3);
  CHECK(c.case_one_cells[2].n1 == 8.0);
}

TEST_CASE("resonance inline variants") {
  const ResonanceConfig c = parse_resonance_config(R"(
resonance:
  signatures: ["+-+-", "--++"]
  convention: plus
  n_samples: 1000
  cells:
    - {xi: {lo: 0, hi: 1}, eta: {N: 2}, sigma: {N: 2}, constraints: [{of: xi-eta, lo: 1, hi: 3}]}
  cm: {points: 16}
)");
  REQUIRE(c.signatures.size() == 2);
  CHECK(c.signatures[1].label() == "--++");
  CHECK(c.convention == PhaseConvention::Plus);
  CHECK(c.cells[0].label == "cell0");
  CHECK(c.cells[0].xi.lo == 0.0);
  CHECK(c.cells[0].constraints[0].which == Combination::XiMinusEta);
  CHECK(c.case_one_cells.empty());
}

TEST_CASE("resonance errors name their keys") {
  const std::string e = resonance_error(R"(
resonance:
  signatures: ["+-+"]
  convention: sideways
  n_samples: 10
  cells:
    - {kind: quadrilinear, xi: {N: 1, lo: 0}, eta: {lo: 2, hi: 1}, sigma: {N: -1}}
  heatmaps:
    - {signature: "++++", points: 1, half_width: 0}
  cm: {points: 7, case_one: [{N0: 2, N1: 1, N2: 1}]}
)");
  REQUIRE_FALSE(e.empty());
  CHECK(has(e, "resonance.signatures:"));
  CHECK(has(e, "resonance.convention:"));
  CHECK(has(e, "resonance.n_samples:"));
  CHECK(has(e, "resonance.cells[0].kind:"));
  CHECK(has(e, "resonance.cells[0].xi: give either N or lo/hi"));
  CHECK(has(e, "resonance.cells[0].eta:"));
  CHECK(has(e, "resonance.cells[0].sigma.N:"));
  CHECK(has(e, "resonance.heatmaps[0].points:"));
  CHECK(has(e, "resonance.heatmaps[0].half_width:"));
  CHECK(has(e, "resonance.cm.points:"));
  CHECK(has(e, "resonance.cm.case_one:"));
  CHECK(has(resonance_error("grid: {n: 64}"), "resonance: section missing"));
  CHECK(has(resonance_error("resonance: {cm: {points: 128}, cells: [{xi: {N: 1}, eta: {N: 1}, sigma: {N: 1}}]}"),
            "resonance.cm.points:"));
}

}  // TEST_SUITE
