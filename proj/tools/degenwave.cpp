// degenwave: command-line front end.
//
//   degenwave run --preset fig2 [--h 0.01 --delta 0.002 --alpha 1 --m 1 --k 1,2,4,8 --T 10 --out DIR]
//   degenwave run --config FILE | --manifest DIR/manifest.json
//   degenwave oracle --k 1 --T 10
//   degenwave oscillator --radius 1.4142 --samples 64

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "degenwave/config.hpp"
#include "degenwave/errors.hpp"
#include "degenwave/experiments.hpp"
#include "degenwave/oracle.hpp"
#include "degenwave/output.hpp"
#include "degenwave/runner.hpp"

using namespace degenwave;

namespace {

// Flags that map one-to-one onto configuration keys.
const char* kRunKeys[] = {"h", "N", "delta", "alpha", "m", "k", "T", "handoff", "rule", "damping",
                          "beta", "oracle", "oracle_factor", "picard_window", "picard_tolerance",
                          "picard_max_iterations", "fit_start", "fit_end", "loglog", "radius",
                          "samples", "oscillator_horizon", "oscillator_step",
                          "oscillator_stiffness", "oscillator_target", "seed", "out"};

int report(const RunOutcome& o) {
  if (o.exit_code == kExitConfigError)
    std::cerr << "config error: " << o.message << "\n";
  else if (o.exit_code == kExitNumericalFailure)
    std::cerr << "numerical failure: " << o.message << "\n";
  else if (o.exit_code == kExitInvariantFailure) {
    for (const auto& c : o.checks)
      if (!c.passed) std::cerr << "invariant check failed: " << c.name << " (" << c.detail << ")\n";
  }
  return o.exit_code;
}

int run_command(const std::optional<std::string>& preset, const std::optional<std::string>& config_file,
                const std::optional<std::string>& manifest,
                const std::map<std::string, std::string>& flags, bool quiet) {
  RunConfig cfg;
  try {
    std::vector<std::pair<std::string, std::string>> file;
    if (manifest) {
      cfg = read_manifest(*manifest);
      if (preset && *preset != cfg.preset)
        throw ConfigError("--preset conflicts with the manifest's preset");
    } else {
      if (config_file) file = read_key_value_file(*config_file);
      std::string name = "fig2";
      for (const auto& [k, v] : file)
        if (k == "preset") name = v;
      if (preset) name = *preset;
      cfg = preset_config(name);
      for (const auto& [k, v] : file)
        if (k != "preset") apply_setting(cfg, k, v);
    }
    for (const auto& [k, v] : flags) apply_setting(cfg, k, v);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  const RunOutcome o = run(cfg, quiet ? nullptr : &std::cout);
  return report(o);
}

int oracle_command(std::size_t k, double horizon, double alpha, int m, double h, double delta,
                   int factor, bool compare, const std::string& out) {
  RunConfig cfg = preset_config("custom");
  try {
    apply_setting(cfg, "h", format_number(h));
    cfg.ks = {k};
    cfg.alpha = alpha;
    cfg.m = m;
    cfg.delta = delta;
    cfg.horizon = cfg.handoff = horizon;
    cfg.oracle_factor = factor;
    validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  try {
    const Mesh mesh = build_mesh(cfg.nodes);
    const SpatialOperators ops = assemble(mesh);
    const auto problem =
        AnsatzProblem::from_sine_amplitude(k, frequency_amplitude(k), 0.0, alpha, m, mesh.nodes());
    const OracleSolution sol = rk4_ansatz(problem, horizon, delta / factor, delta);
    Vector t(sol.size()), e(sol.size());
    for (std::size_t i = 0; i < sol.size(); ++i) {
      t[i] = sol.time(i);
      e[i] = energy(ops, oracle_field(sol, i, mesh));
    }
    const std::string csv = csv_text({{"t", &t}, {"E", &e}});
    if (out.empty() || out == "-")
      std::cout << csv;
    else
      write_text(out, csv);
    if (compare) {
      const Simulator sim(ops, delta);
      SimulationOptions opts;
      opts.horizon = opts.handoff = horizon;
      const auto fem = sim.run(frequency_initial_state(ops, k), DampingLaw::degenerate(alpha, m), opts, k);
      const EnergyComparison c = compare_energy_norm(ops, fem.trajectory, sol);
      std::fprintf(stderr, "e_%zu = %.6e (max energy-norm difference), state distance %.6e\n", k,
                   c.norm_gap, c.state_distance);
    }
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite element experiments for the degenerately damped wave equation"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run a preset or configured experiment");
  std::optional<std::string> preset, config_file, manifest;
  bool quiet = false;
  run_cmd->add_option("--preset", preset, "fig1|fig2|fig3|primitive|oscillator|sweep|custom");
  run_cmd->add_option("--config", config_file, "Flat key = value config file (flags override it)");
  run_cmd->add_option("--manifest", manifest, "Re-run from a manifest.json");
  run_cmd->add_flag("--quiet,-q", quiet, "Suppress the progress report on stdout");
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_opts;
  for (const char* key : kRunKeys) {
    std::string name = std::string("--") + key;
    flag_opts[key] = run_cmd->add_option(name, flag_values[key]);
  }

  auto* oracle_cmd = app.add_subcommand("oracle", "Integrate the eigenfunction ansatz oracle (CSV t,E)");
  std::size_t ok_k = 1;
  double o_T = 10.0, o_alpha = 1.0, o_h = 0.01, o_delta = 2e-3;
  int o_m = 1, o_factor = 10;
  bool o_compare = false;
  std::string o_out;
  oracle_cmd->add_option("--k", ok_k, "Frequency")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--T", o_T, "Horizon");
  oracle_cmd->add_option("--alpha", o_alpha);
  oracle_cmd->add_option("--m", o_m);
  oracle_cmd->add_option("--h", o_h, "Mesh size (the ansatz is sampled at the nodes)");
  oracle_cmd->add_option("--delta", o_delta, "Recording step");
  oracle_cmd->add_option("--factor", o_factor, "RK4 substeps per recording step");
  oracle_cmd->add_flag("--compare", o_compare, "Also run the FEM pipeline and print e_k");
  oracle_cmd->add_option("--out", o_out, "Output CSV (default stdout)");

  auto* osc_cmd = app.add_subcommand("oscillator", "Uniform-stability sweep of the damped oscillator");
  double s_radius = 1.4142135623730951, s_horizon = 2000.0, s_step = 1e-2, s_alpha = 1.0;
  std::size_t s_samples = 64;
  std::uint64_t s_seed = 0;
  int s_m = 1;
  std::string s_out = "degenwave-oscillator";
  osc_cmd->add_option("--radius", s_radius);
  osc_cmd->add_option("--samples", s_samples);
  osc_cmd->add_option("--horizon", s_horizon);
  osc_cmd->add_option("--step", s_step);
  osc_cmd->add_option("--alpha", s_alpha);
  osc_cmd->add_option("--m", s_m);
  osc_cmd->add_option("--seed", s_seed);
  osc_cmd->add_option("--out", s_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitConfigError;
  }

  try {
    if (*run_cmd) {
      std::map<std::string, std::string> flags;
      for (const char* key : kRunKeys)
        if (flag_opts[key]->count() > 0) flags[key] = flag_values[key];
      return run_command(preset, config_file, manifest, flags, quiet);
    }
    if (*oracle_cmd) return oracle_command(ok_k, o_T, o_alpha, o_m, o_h, o_delta, o_factor, o_compare, o_out);
    if (*osc_cmd) {
      RunConfig cfg = preset_config("oscillator");
      cfg.radius = s_radius;
      cfg.samples = s_samples;
      cfg.oscillator_horizon = s_horizon;
      cfg.oscillator_step = s_step;
      cfg.alpha = s_alpha;
      cfg.m = s_m;
      cfg.seed = s_seed;
      cfg.out = s_out;
      return report(run(cfg, &std::cout));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
  return kExitSuccess;
}
