#include "degenwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "degenwave/errors.hpp"

namespace degenwave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + key + "': " + v);
  }
}

long long to_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for '" + key + "': " + v);
  }
}

std::size_t to_count(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < 0) throw ConfigError("'" + key + "' must be nonnegative");
  return static_cast<std::size_t>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("invalid boolean for '" + key + "': " + v);
}

bool is_multiple(double horizon, double step) {
  const double q = horizon / step;
  return std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, q);
}

}  // namespace

double RunConfig::linear_beta() const {
  return beta > 0.0 ? beta : 4.0 / (std::numbers::pi * std::numbers::pi);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig1",       "fig2",  "fig3",  "primitive",
                                                 "oscillator", "sweep", "custom"};
  return names;
}

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "fig1") {
    c.ks = {1};
    c.damping = "degenerate";
  } else if (name == "fig2") {
    c.oracle = true;
  } else if (name == "fig3") {
    c.horizon = 50.0;
    c.handoff = 10.0;
  } else if (name == "primitive") {
    c.ks = {1};
    c.horizon = 50.0;
    c.handoff = 10.0;
    c.loglog = true;
  } else if (name == "oscillator" || name == "sweep" || name == "custom") {
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

std::vector<std::size_t> parse_k_list(const std::string& text) {
  std::vector<std::size_t> ks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const long long k = to_integer("k", item);
    if (k < 1) throw ConfigError("frequencies must be >= 1");
    ks.push_back(static_cast<std::size_t>(k));
  }
  if (ks.empty()) throw ConfigError("empty frequency list");
  return ks;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "preset") {
    if (std::find(preset_names().begin(), preset_names().end(), v) == preset_names().end())
      throw ConfigError("unknown preset '" + v + "'");
    c.preset = v;
  } else if (key == "alpha") {
    c.alpha = to_double(key, v);
  } else if (key == "m") {
    c.m = static_cast<int>(to_integer(key, v));
  } else if (key == "k" || key == "ks") {
    c.ks = parse_k_list(v);
  } else if (key == "h") {
    const double h = to_double(key, v);
    if (!(h > 0.0) || h >= 1.0) throw ConfigError("h must lie in (0, 1)");
    const double cells = 1.0 / h;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-6 * rounded)
      throw ConfigError("h must be 1/(N+1) for an integer N; got " + v);
    if (rounded < 2) throw ConfigError("h too large: need at least one interior node");
    c.nodes = static_cast<std::size_t>(rounded) - 1;
  } else if (key == "N" || key == "nodes") {
    c.nodes = to_count(key, v);
  } else if (key == "delta") {
    c.delta = to_double(key, v);
  } else if (key == "T" || key == "horizon") {
    c.horizon = to_double(key, v);
  } else if (key == "handoff") {
    c.handoff = to_double(key, v);
  } else if (key == "rule") {
    c.rule = v;
  } else if (key == "damping") {
    c.damping = v;
  } else if (key == "beta") {
    c.beta = to_double(key, v);
  } else if (key == "oracle") {
    c.oracle = to_bool(key, v);
  } else if (key == "oracle_factor") {
    c.oracle_factor = static_cast<int>(to_integer(key, v));
  } else if (key == "picard_window") {
    c.picard_window = to_double(key, v);
  } else if (key == "picard_tolerance") {
    c.picard_tolerance = to_double(key, v);
  } else if (key == "picard_max_iterations") {
    c.picard_max_iterations = static_cast<int>(to_integer(key, v));
  } else if (key == "fit_start") {
    c.fit_start = to_double(key, v);
  } else if (key == "fit_end") {
    c.fit_end = to_double(key, v);
  } else if (key == "loglog") {
    c.loglog = to_bool(key, v);
  } else if (key == "radius") {
    c.radius = to_double(key, v);
  } else if (key == "samples") {
    c.samples = to_count(key, v);
  } else if (key == "oscillator_horizon") {
    c.oscillator_horizon = to_double(key, v);
  } else if (key == "oscillator_step") {
    c.oscillator_step = to_double(key, v);
  } else if (key == "oscillator_stiffness") {
    c.oscillator_stiffness = to_double(key, v);
  } else if (key == "oscillator_target") {
    c.oscillator_target = to_double(key, v);
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(to_count(key, v));
  } else if (key == "out") {
    c.out = v;
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    else if (value.size() >= 2 && value.front() == '[' && value.back() == ']')
      value = value.substr(1, value.size() - 2);
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

void validate(const RunConfig& c) {
  if (std::find(preset_names().begin(), preset_names().end(), c.preset) == preset_names().end())
    throw ConfigError("unknown preset '" + c.preset + "'");
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(std::string(name) + " must be positive");
  };
  if (c.preset == "oscillator") {
    positive(c.radius, "radius");
    positive(c.oscillator_horizon, "oscillator_horizon");
    positive(c.oscillator_step, "oscillator_step");
    positive(c.oscillator_stiffness, "oscillator_stiffness");
    positive(c.oscillator_target, "oscillator_target");
    if (!(c.alpha >= 0.0)) throw ConfigError("alpha must be nonnegative");
    if (c.m < 1) throw ConfigError("m must be >= 1");
    if (c.samples == 0) throw ConfigError("samples must be positive");
    return;
  }
  if (!(c.alpha >= 0.0) || !std::isfinite(c.alpha)) throw ConfigError("alpha must be nonnegative");
  if (c.m < 1) throw ConfigError("m must be >= 1");
  if (c.nodes < 8) throw ConfigError("need at least 8 interior nodes");
  positive(c.delta, "delta");
  positive(c.horizon, "T");
  positive(c.handoff, "handoff");
  positive(c.picard_window, "picard_window");
  positive(c.picard_tolerance, "picard_tolerance");
  if (c.picard_max_iterations < 1) throw ConfigError("picard_max_iterations must be >= 1");
  if (c.oracle_factor < 1) throw ConfigError("oracle_factor must be >= 1");
  if (c.beta < 0.0) throw ConfigError("beta must be nonnegative");
  if (!is_multiple(c.horizon, c.delta)) throw ConfigError("delta must divide T");
  if (!is_multiple(std::min(c.handoff, c.horizon), c.delta))
    throw ConfigError("delta must divide the AB5 handoff time");
  if (c.rule != "boole" && c.rule != "simpson38")
    throw ConfigError("rule must be boole or simpson38");
  if (c.damping != "degenerate" && c.damping != "linear" && c.damping != "primitive")
    throw ConfigError("damping must be degenerate, linear or primitive");
  if (c.ks.empty()) throw ConfigError("empty frequency list");
  const std::size_t kmax = c.nodes / 8;
  for (std::size_t k : c.ks)
    if (k < 1 || k > kmax)
      throw ConfigError("frequency k = " + std::to_string(k) +
                        " is not resolved (need k <= N/8 = " + std::to_string(kmax) + ")");
  if (c.preset == "primitive" && !(c.fit_end > c.fit_start && c.fit_start > 0.0))
    throw ConfigError("need 0 < fit_start < fit_end");
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["preset"] = c.preset;
  j["alpha"] = c.alpha;
  j["m"] = c.m;
  j["k"] = c.ks;
  j["N"] = c.nodes;
  j["h"] = c.h();
  j["delta"] = c.delta;
  j["T"] = c.horizon;
  j["handoff"] = c.handoff;
  j["rule"] = c.rule;
  j["damping"] = c.damping;
  j["beta"] = c.beta;
  j["oracle"] = c.oracle;
  j["oracle_factor"] = c.oracle_factor;
  j["picard_window"] = c.picard_window;
  j["picard_tolerance"] = c.picard_tolerance;
  j["picard_max_iterations"] = c.picard_max_iterations;
  j["fit_start"] = c.fit_start;
  j["fit_end"] = c.fit_end;
  j["loglog"] = c.loglog;
  j["radius"] = c.radius;
  j["samples"] = c.samples;
  j["oscillator_horizon"] = c.oscillator_horizon;
  j["oscillator_step"] = c.oscillator_step;
  j["oscillator_stiffness"] = c.oscillator_stiffness;
  j["oscillator_target"] = c.oscillator_target;
  j["seed"] = c.seed;
  j["out"] = c.out;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  const nlohmann::json& cfg = j.contains("config") ? j.at("config") : j;
  try {
    RunConfig c = preset_config(cfg.value("preset", std::string("fig2")));
    auto get = [&](const char* key, auto& field) {
      if (cfg.contains(key)) cfg.at(key).get_to(field);
    };
    get("alpha", c.alpha);
    get("m", c.m);
    get("k", c.ks);
    get("N", c.nodes);
    get("delta", c.delta);
    get("T", c.horizon);
    get("handoff", c.handoff);
    get("rule", c.rule);
    get("damping", c.damping);
    get("beta", c.beta);
    get("oracle", c.oracle);
    get("oracle_factor", c.oracle_factor);
    get("picard_window", c.picard_window);
    get("picard_tolerance", c.picard_tolerance);
    get("picard_max_iterations", c.picard_max_iterations);
    get("fit_start", c.fit_start);
    get("fit_end", c.fit_end);
    get("loglog", c.loglog);
    get("radius", c.radius);
    get("samples", c.samples);
    get("oscillator_horizon", c.oscillator_horizon);
    get("oscillator_step", c.oscillator_step);
    get("oscillator_stiffness", c.oscillator_stiffness);
    get("oscillator_target", c.oscillator_target);
    get("seed", c.seed);
    get("out", c.out);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
}

RunConfig read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read manifest '" + path + "'");
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }
}

std::string library_version() { return DEGENWAVE_VERSION; }

}  // namespace degenwave
