#pragma once

// Run configuration: presets, a flat key = value file format, and the JSON
// manifest written next to every run.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace degenwave {

struct RunConfig {
  std::string preset = "fig2";  // fig1 | fig2 | fig3 | primitive | oscillator | sweep | custom
  double alpha = 1.0;
  int m = 1;
  std::vector<std::size_t> ks = {1, 2, 4, 8};
  std::size_t nodes = 99;  // interior nodes N; h = 1 / (N + 1)
  double delta = 2e-3;
  double horizon = 10.0;
  double handoff = 10.0;  // Picard up to here, AB5 afterwards
  std::string rule = "boole";  // boole | simpson38
  std::string damping = "degenerate";  // degenerate | linear | primitive (custom preset)
  double beta = 0.0;  // linear damping coefficient; 0 selects (2/pi)^2
  bool oracle = false;
  int oracle_factor = 10;  // oracle RK4 step = delta / oracle_factor
  double picard_window = 1.0;
  double picard_tolerance = 1e-8;
  int picard_max_iterations = 50;
  double fit_start = 10.0;
  double fit_end = 50.0;
  bool loglog = false;
  double radius = 1.4142135623730951;
  std::size_t samples = 64;
  double oscillator_horizon = 2000.0;
  double oscillator_step = 1e-2;
  double oscillator_stiffness = 1.0;
  double oscillator_target = 0.1;
  std::uint64_t seed = 0;
  std::string out = "degenwave-out";

  double h() const { return 1.0 / static_cast<double>(nodes + 1); }
  double linear_beta() const;
};

// Defaults for a named preset; throws ConfigError for unknown names.
RunConfig preset_config(const std::string& name);
const std::vector<std::string>& preset_names();

// Sets one key; accepts the same keys as the config file ("h" is converted to
// the node count). Throws ConfigError for unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Flat "key = value" lines; '#' starts a comment; strings may be quoted.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text);
std::vector<std::pair<std::string, std::string>> read_key_value_file(const std::string& path);

// Throws ConfigError when the configuration cannot be run.
void validate(const RunConfig& cfg);

std::vector<std::size_t> parse_k_list(const std::string& text);

nlohmann::json to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);
// Reads a manifest.json written by a previous run.
RunConfig read_manifest(const std::string& path);

std::string library_version();

}  // namespace degenwave
