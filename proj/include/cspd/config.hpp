#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cspd/diagnostics.hpp"
#include "cspd/dynamics.hpp"
#include "cspd/resonance.hpp"

namespace cspd {

struct RunConfig {
  struct {
    int n = 512;
    double L = 100.0;
  } grid;
  struct {
    double lambda = 1.0;
    InitialData init;
    bool nonlinear = true;
  } physics;
  struct {
    double dt = 0.02;
    double t_end = 40.0;
    double sample_interval = 0.5;
    int max_halvings = 6;
  } time;
  struct {
    std::vector<double> tracked_N{0.25, 1.0, 4.0};
    std::vector<int> tracked_k{0, 1, 2, 3, 4, 5, 6, 7};
    double high_s = 10.0;
    double fit_t_a = 10.0;
    double fit_t_b = 35.0;
    double gamma = 0.05;
    double delta = 0.05;
    std::vector<double> scattering_times{5.0, 10.0, 20.0};
    bool allow_past_horizon = false;
  } diagnostics;
  struct {
    std::filesystem::path directory = "cspd_out";
    bool csv = true;
    bool json = true;
    bool snapshots = true;
    double checkpoint_interval = 10.0;
  } output;
  std::uint64_t seed = 0;

  double horizon() const { return wraparound_horizon(grid.L, physics.init.width); }
};

struct HeatmapRequest {
  PhaseSignature signature;
  Vec2d xi = Vec2d::Zero();
  Vec2d sigma = Vec2d::Zero();
  double half_width = 4.0;
  int points = 101;
  std::string file = "heatmap.csv";
};

struct ResonanceConfig {
  std::vector<PhaseSignature> signatures;
  PhaseConvention convention = PhaseConvention::Minus;
  std::vector<ResonanceCell> cells;
  int n_samples = 10000;
  std::uint64_t seed = 0;
  std::vector<HeatmapRequest> heatmaps;
  std::vector<CaseOneCell> case_one_cells;
  int cm_points = 32;
  std::filesystem::path directory = "cspd_out";
};

/// Every violation found, each prefixed with the offending key. Empty means
/// the configuration is valid.
std::vector<std::string> validate(const RunConfig& c);
std::vector<std::string> validate(const ResonanceConfig& c);

/// Parse YAML text or a file. Unknown keys, malformed values and every
/// validation failure are collected into one ConfigError.
RunConfig parse_run_config(const std::string& yaml_text);
RunConfig load_run_config(const std::filesystem::path& path);
ResonanceConfig parse_resonance_config(const std::string& yaml_text);
ResonanceConfig load_resonance_config(const std::filesystem::path& path);

/// Which kind of document a file holds, judged by its top-level keys.
enum class ConfigKind { Run, Resonance };
ConfigKind detect_config_kind(const std::filesystem::path& path);

/// CSPD_OUTPUT_DIR, when set and nonempty, replaces the output directory.
std::filesystem::path output_directory(const std::filesystem::path& configured);

}  // namespace cspd
