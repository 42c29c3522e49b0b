#include "spinbath_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace spinbath::cli {

namespace {

const std::vector<std::pair<Analysis, std::string>>& analysis_table() {
  static const std::vector<std::pair<Analysis, std::string>> table{
      {Analysis::decoherence, "decoherence"}, {Analysis::lee_yang, "lee-yang"},
      {Analysis::trace_distance, "trace-distance"}, {Analysis::cpf, "cpf"},
      {Analysis::pip, "pip"}, {Analysis::sbs, "sbs"},
      {Analysis::purity, "purity"}, {Analysis::sweep, "sweep"}};
  return table;
}

void check_keys(const YAML::Node& node, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError(where + "." + key + ": unknown key");
  }
}

template <typename T>
void read(const YAML::Node& node, const std::string& key, const std::string& where, T& out) {
  const YAML::Node v = node[key];
  if (!v) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + "." + key + ": cannot convert '" + YAML::Dump(v) + "'");
  }
}

template <typename T>
void read_optional(const YAML::Node& node, const std::string& key, const std::string& where,
                   std::optional<T>& out) {
  if (!node[key]) return;
  T value{};
  read(node, key, where, value);
  out = value;
}

void require_finite(double v, const std::string& field) {
  if (!std::isfinite(v)) throw ConfigError(field + ": must be finite");
}

void require_list(const std::vector<double>& values, const std::string& field) {
  for (double v : values) require_finite(v, field);
}

}  // namespace

const std::vector<std::string>& analysis_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [a, name] : analysis_table()) out.push_back(name);
    return out;
  }();
  return names;
}

std::string to_string(Analysis a) {
  for (const auto& [value, name] : analysis_table()) {
    if (value == a) return name;
  }
  return "unknown";
}

Analysis parse_analysis(const std::string& name) {
  for (const auto& [value, n] : analysis_table()) {
    if (n == name) return value;
  }
  throw ConfigError("analysis: unknown analysis '" + name + "'");
}

double RunConfig::t_max() const {
  return grid.t_max.value_or(recoherence_period(system.alpha));
}

double RunConfig::s_max() const {
  return grid.s_max.value_or(recoherence_period(system.alpha));
}

TimeGrid RunConfig::time_grid() const { return {grid.t_min, t_max(), grid.t_steps}; }

TimeGrid RunConfig::delay_grid() const { return {grid.s_min, s_max(), grid.s_steps}; }

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: YAML parse error: ") + e.what());
  }

  RunConfig cfg;
  if (!root || root.IsNull()) {
    resolve(cfg);
    return cfg;
  }
  check_keys(root, "config", {"bath", "system", "grid", "pip", "sbs", "cpf", "sweep", "output"});

  if (const auto node = root["bath"]) {
    check_keys(node, "bath", {"J", "h", "beta", "n", "boundary"});
    read(node, "J", "bath", cfg.bath.J);
    read(node, "h", "bath", cfg.bath.h);
    read(node, "beta", "bath", cfg.bath.beta);
    read(node, "n", "bath", cfg.bath.n);
    std::string boundary = "periodic";
    read(node, "boundary", "bath", boundary);
    if (boundary != "periodic") {
      throw ConfigError("bath.boundary: only 'periodic' is supported, got '" + boundary + "'");
    }
  }
  if (const auto node = root["system"]) {
    check_keys(node, "system", {"alpha", "a_re", "a_im", "b_re", "b_im", "omega"});
    double a_re = cfg.system.a.real(), a_im = cfg.system.a.imag();
    double b_re = cfg.system.b.real(), b_im = cfg.system.b.imag();
    read(node, "alpha", "system", cfg.system.alpha);
    read(node, "a_re", "system", a_re);
    read(node, "a_im", "system", a_im);
    read(node, "b_re", "system", b_re);
    read(node, "b_im", "system", b_im);
    read(node, "omega", "system", cfg.system.omega);
    cfg.system.a = {a_re, a_im};
    cfg.system.b = {b_re, b_im};
  }
  if (const auto node = root["grid"]) {
    check_keys(node, "grid",
               {"t_min", "t_max", "t_steps", "s_min", "s_max", "s_steps", "beta_list"});
    read(node, "t_min", "grid", cfg.grid.t_min);
    read_optional(node, "t_max", "grid", cfg.grid.t_max);
    read(node, "t_steps", "grid", cfg.grid.t_steps);
    read(node, "s_min", "grid", cfg.grid.s_min);
    read_optional(node, "s_max", "grid", cfg.grid.s_max);
    read(node, "s_steps", "grid", cfg.grid.s_steps);
    read(node, "beta_list", "grid", cfg.grid.beta_list);
  }
  if (const auto node = root["pip"]) {
    check_keys(node, "pip", {"times"});
    read(node, "times", "pip", cfg.pip_times);
  }
  if (const auto node = root["sbs"]) {
    check_keys(node, "sbs", {"fraction"});
    read(node, "fraction", "sbs", cfg.sbs_fraction);
  }
  if (const auto node = root["cpf"]) {
    check_keys(node, "cpf", {"outcome"});
    std::string outcome = "plus";
    read(node, "outcome", "cpf", outcome);
    if (outcome == "plus" || outcome == "+") {
      cfg.cpf_outcome = Outcome::plus;
    } else if (outcome == "minus" || outcome == "-") {
      cfg.cpf_outcome = Outcome::minus;
    } else {
      throw ConfigError("cpf.outcome: expected 'plus' or 'minus'");
    }
  }
  if (const auto node = root["sweep"]) {
    check_keys(node, "sweep", {"analysis", "n", "J", "h", "beta", "alpha", "cap"});
    std::string analysis = to_string(cfg.sweep.analysis);
    read(node, "analysis", "sweep", analysis);
    cfg.sweep.analysis = parse_analysis(analysis);
    read(node, "n", "sweep", cfg.sweep.n);
    read(node, "J", "sweep", cfg.sweep.J);
    read(node, "h", "sweep", cfg.sweep.h);
    read(node, "beta", "sweep", cfg.sweep.beta);
    read(node, "alpha", "sweep", cfg.sweep.alpha);
    read(node, "cap", "sweep", cfg.sweep.cap);
  }
  if (const auto node = root["output"]) {
    check_keys(node, "output", {"path", "format", "threads"});
    read(node, "path", "output", cfg.out_path);
    std::string format = "csv";
    read(node, "format", "output", format);
    if (format == "csv") {
      cfg.format = Format::csv;
    } else if (format == "json") {
      cfg.format = Format::json;
    } else {
      throw ConfigError("output.format: expected 'csv' or 'json'");
    }
    read_optional(node, "threads", "output", cfg.threads);
  }

  resolve(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading config file '" + path + "'");
  return parse_config(buf.str());
}

void resolve(RunConfig& cfg) {
  const auto& bath = cfg.bath;
  require_finite(bath.J, "bath.J");
  require_finite(bath.h, "bath.h");
  require_finite(bath.beta, "bath.beta");
  if (bath.beta < 0.0) throw ConfigError("bath.beta: must be >= 0");
  if (bath.n < 1) throw ConfigError("bath.n: must be >= 1");

  auto& sys = cfg.system;
  require_finite(sys.alpha, "system.alpha");
  if (sys.alpha <= 0.0 || sys.alpha > 1.0) throw ConfigError("system.alpha: must lie in (0, 1]");
  require_finite(sys.omega, "system.omega");
  const double norm = std::norm(sys.a) + std::norm(sys.b);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6) {
    throw ConfigError("system.a/system.b: |a|^2 + |b|^2 = " + std::to_string(norm) +
                      " is not normalized");
  }
  if (std::abs(norm - 1.0) > 1e-12) {
    const double scale = 1.0 / std::sqrt(norm);
    sys.a *= scale;
    sys.b *= scale;
    if (std::abs(std::norm(sys.a) + std::norm(sys.b) - 1.0) > 1e-12) {
      throw ConfigError("system.a/system.b: renormalization failed");
    }
    cfg.warnings.push_back("system: amplitudes renormalized (|a|^2 + |b|^2 was " +
                           std::to_string(norm) + ")");
  }

  auto& grid = cfg.grid;
  require_finite(grid.t_min, "grid.t_min");
  if (grid.t_min < 0.0) throw ConfigError("grid.t_min: must be >= 0");
  if (grid.t_steps < 2) throw ConfigError("grid.t_steps: must be >= 2 (empty time grid)");
  if (!std::isfinite(cfg.t_max()) || !(cfg.t_max() > grid.t_min)) {
    throw ConfigError("grid.t_max: must be finite and greater than grid.t_min");
  }
  require_finite(grid.s_min, "grid.s_min");
  if (grid.s_min < 0.0) throw ConfigError("grid.s_min: must be >= 0");
  if (grid.s_steps < 2) throw ConfigError("grid.s_steps: must be >= 2 (empty delay grid)");
  if (!std::isfinite(cfg.s_max()) || !(cfg.s_max() > grid.s_min)) {
    throw ConfigError("grid.s_max: must be finite and greater than grid.s_min");
  }
  require_list(grid.beta_list, "grid.beta_list");
  for (double b : grid.beta_list) {
    if (b < 0.0) throw ConfigError("grid.beta_list: entries must be >= 0");
  }

  require_list(cfg.pip_times, "pip.times");
  for (double t : cfg.pip_times) {
    if (t < 0.0) throw ConfigError("pip.times: entries must be >= 0");
  }
  if (!(cfg.sbs_fraction >= 0.0 && cfg.sbs_fraction <= 1.0)) {
    throw ConfigError("sbs.fraction: must lie in [0, 1]");
  }

  auto& sweep = cfg.sweep;
  if (sweep.analysis == Analysis::sweep) throw ConfigError("sweep.analysis: cannot be 'sweep'");
  for (int n : sweep.n) {
    if (n < 1) throw ConfigError("sweep.n: entries must be >= 1");
  }
  require_list(sweep.J, "sweep.J");
  require_list(sweep.h, "sweep.h");
  require_list(sweep.beta, "sweep.beta");
  for (double b : sweep.beta) {
    if (b < 0.0) throw ConfigError("sweep.beta: entries must be >= 0");
  }
  require_list(sweep.alpha, "sweep.alpha");
  for (double a : sweep.alpha) {
    if (a <= 0.0 || a > 1.0) throw ConfigError("sweep.alpha: entries must lie in (0, 1]");
  }
  if (sweep.cap < 1) throw ConfigError("sweep.cap: must be >= 1");

  if (cfg.threads && *cfg.threads < 1) throw ConfigError("output.threads: must be >= 1");
}

nlohmann::ordered_json config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["bath"] = {{"J", cfg.bath.J}, {"h", cfg.bath.h}, {"beta", cfg.bath.beta}, {"n", cfg.bath.n},
               {"boundary", "periodic"}};
  j["system"] = {{"alpha", cfg.system.alpha},     {"a_re", cfg.system.a.real()},
                 {"a_im", cfg.system.a.imag()},   {"b_re", cfg.system.b.real()},
                 {"b_im", cfg.system.b.imag()},   {"omega", cfg.system.omega}};
  j["grid"] = {{"t_min", cfg.grid.t_min},   {"t_max", cfg.t_max()},
               {"t_steps", cfg.grid.t_steps}, {"s_min", cfg.grid.s_min},
               {"s_max", cfg.s_max()},       {"s_steps", cfg.grid.s_steps},
               {"beta_list", cfg.grid.beta_list}};
  j["pip"] = {{"times", cfg.pip_times}};
  j["sbs"] = {{"fraction", cfg.sbs_fraction}};
  j["cpf"] = {{"outcome", cfg.cpf_outcome == Outcome::plus ? "plus" : "minus"}};
  j["sweep"] = {{"analysis", to_string(cfg.sweep.analysis)},
                {"n", cfg.sweep.n},
                {"J", cfg.sweep.J},
                {"h", cfg.sweep.h},
                {"beta", cfg.sweep.beta},
                {"alpha", cfg.sweep.alpha},
                {"cap", cfg.sweep.cap}};
  j["output"] = {{"path", cfg.out_path}, {"format", cfg.format == Format::csv ? "csv" : "json"}};
  return j;
}

}  // namespace spinbath::cli
