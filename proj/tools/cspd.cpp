// Command-line entry point: simulate, resonance, check, version.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cspd/config.hpp"
#include "cspd/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

int check(const std::string& path) {
  if (cspd::detect_config_kind(path) == cspd::ConfigKind::Resonance) {
    const auto c = cspd::load_resonance_config(path);
    std::cout << "resonance config OK: " << c.signatures.size() << " signatures, "
              << c.cells.size() << " cells\n";
  } else {
    const auto c = cspd::load_run_config(path);
    std::cout << "run config OK: n = " << c.grid.n << ", L = " << c.grid.L
              << ", t_end = " << c.time.t_end << ", horizon = " << c.horizon() << "\n";
  }
  return kExitOk;
}

int simulate(const std::string& path, bool quiet) {
  const auto cfg = cspd::load_run_config(path);
  const auto s = cspd::run_simulation(cfg, quiet ? nullptr : &std::cerr);
  std::cout << "wrote " << s.records.size() << " samples to " << s.directory.string() << "\n";
  for (const auto& f : s.fits)
    if (f.fit) std::printf("%s exponent %.4f\n", f.series.c_str(), f.fit->exponent);
  return kExitOk;
}

int resonance(const std::string& path, bool quiet) {
  const auto cfg = cspd::load_resonance_config(path);
  const auto r = cspd::run_resonance_report(cfg, quiet ? nullptr : &std::cerr);
  std::cout << "wrote " << r.reports.size() << " reports to " << r.directory.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Dirac / Chern-Simons-Proca simulator and resonance toolkit"};
  app.require_subcommand(1);
  std::string config;
  bool quiet = false;

  auto* sim = app.add_subcommand("simulate", "run a simulation from a YAML config");
  sim->add_option("config", config, "run configuration")->required();
  sim->add_flag("-q,--quiet", quiet, "no progress output");
  auto* res = app.add_subcommand("resonance", "write a resonance report from a YAML config");
  res->add_option("config", config, "resonance configuration")->required();
  res->add_flag("-q,--quiet", quiet, "no progress output");
  auto* chk = app.add_subcommand("check", "validate a config without running it");
  chk->add_option("config", config, "run or resonance configuration")->required();
  auto* ver = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (ver->parsed()) {
      std::cout << "cspd " << CSPD_VERSION << "\n";
      return kExitOk;
    }
    if (chk->parsed()) return check(config);
    if (sim->parsed()) return simulate(config, quiet);
    if (res->parsed()) return resonance(config, quiet);
  } catch (const cspd::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const cspd::DivergenceError& e) {
    std::cerr << "numerical divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
