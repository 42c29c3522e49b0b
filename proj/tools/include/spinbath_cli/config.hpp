#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <spinbath/bath.hpp>
#include <spinbath/dephasing.hpp>
#include <spinbath/witnesses.hpp>

namespace spinbath::cli {

/// Bad or missing configuration values. Exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output. Exit status 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

enum class Analysis { decoherence, lee_yang, trace_distance, cpf, pip, sbs, purity, sweep };

const std::vector<std::string>& analysis_names();
std::string to_string(Analysis a);
/// Throws ConfigError for unknown names.
Analysis parse_analysis(const std::string& name);

struct GridConfig {
  double t_min = 0.0;
  std::optional<double> t_max;  ///< defaults to the recoherence period
  int t_steps = 201;
  double s_min = 0.0;
  std::optional<double> s_max;
  int s_steps = 20;
  std::vector<double> beta_list;
};

struct SweepConfig {
  Analysis analysis = Analysis::decoherence;
  std::vector<int> n;
  std::vector<double> J;
  std::vector<double> h;
  std::vector<double> beta;
  std::vector<double> alpha;
  std::size_t cap = 1'000'000;
};

struct RunConfig {
  BathParams bath{1.0, 0.1, 1.0, 10};
  SystemParams system;
  GridConfig grid;
  std::vector<double> pip_times;  ///< defaults to half the recoherence period
  double sbs_fraction = 0.5;
  Outcome cpf_outcome = Outcome::plus;
  SweepConfig sweep;
  std::string out_path;
  Format format = Format::csv;
  std::optional<int> threads;
  /// Non-fatal adjustments made while resolving (amplitude renormalization).
  std::vector<std::string> warnings;

  double t_max() const;
  double s_max() const;
  TimeGrid time_grid() const;
  TimeGrid delay_grid() const;
};

/// Parses a YAML document. Unknown keys are errors so that typos cannot pass
/// silently. The result is validated.
RunConfig parse_config(const std::string& text);
/// Reads and parses a file; IoError if it cannot be read.
RunConfig load_config(const std::string& path);

/// Checks every block; the ConfigError message names the offending field.
/// Amplitudes off by at most 1e-6 in norm are renormalized with a warning.
void resolve(RunConfig& cfg);

/// Resolved configuration, every default filled in, in the same layout as
/// the YAML input.
nlohmann::ordered_json config_to_json(const RunConfig& cfg);

}  // namespace spinbath::cli
