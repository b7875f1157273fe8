#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cspd/config.hpp"
#include "cspd/diagnostics.hpp"

namespace cspd {

struct SeriesFit {
  std::string series;
  std::optional<DecayFit> fit;
  std::string error;  ///< set when the fit could not be made
};

struct NamedEnvelope {
  std::string name;
  Envelope env;
};

struct ScatteringEntry {
  double t = 0.0;
  double plus = 0.0, minus = 0.0;
  double combined = 0.0;  ///< sqrt(plus^2 + minus^2)
};

struct RunSummary {
  RunConfig config;
  double horizon = 0.0;
  double dt_used = 0.0;
  int halvings = 0;
  std::vector<std::string> columns;
  std::vector<DiagnosticsRecord> records;
  std::vector<SeriesFit> fits;  ///< one per tracked k
  NamedEnvelope sup_envelope;   ///< max over k of <t>^{3/4} sup_k
  std::vector<NamedEnvelope> sup_envelopes;
  std::vector<NamedEnvelope> bilinear_envelopes;
  std::vector<NamedEnvelope> time_derivative_envelopes;
  std::vector<ScatteringEntry> scattering;
  double initial_weighted_norm = 0.0;
  double max_mass_drift = 0.0;  ///< max relative |mass(t) - mass(0)|
  GaugeResidual residual_max;
  double wall_seconds = 0.0;
  ProfileState final_state;
  std::filesystem::path directory;
};

/// Full simulation: validates, integrates, samples diagnostics, writes
/// diagnostics.csv, summary.json, snapshots and checkpoints. Throws
/// ConfigError before any computation, DivergenceError if halving dt does
/// not cure a non-finite stage (the last good checkpoint is kept).
RunSummary run_simulation(const RunConfig& cfg, std::ostream* log = nullptr);

/// Post-processing shared by the runner and the tests: fits and envelopes
/// over the configured window, from records alone.
void analyse_records(RunSummary& s);

std::string summary_json(const RunSummary& s);

struct ResonanceOutput {
  std::vector<ResonanceReport> reports;
  std::array<SignatureRow, 16> table;
  std::vector<CaseOneEstimate> case_one;
  double case_one_constant = 0.0;  ///< max ratio over the case (i) cells
  std::vector<std::filesystem::path> heatmaps;
  std::filesystem::path directory;
};

/// Writes resonance.json (array, one object per signature and cell),
/// resonance_summary.json (16-signature table and CM estimates) and the
/// requested heatmap CSVs.
ResonanceOutput run_resonance_report(const ResonanceConfig& cfg, std::ostream* log = nullptr);

}  // namespace cspd
