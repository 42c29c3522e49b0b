#pragma once

#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "spinbath_cli/config.hpp"
#include "spinbath_cli/table.hpp"

namespace spinbath::cli {

/// Environment variable that overrides every other thread-count source.
inline constexpr const char* kThreadsEnv = "SPINBATH_THREADS";

struct RunResult {
  Table table;
  /// Scalars that do not fit the row schema (e.g. the accumulated BLP measure).
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
};

/// Worker count: SPINBATH_THREADS if set, else the --threads flag, else
/// output.threads from the config, else the hardware concurrency.
int resolve_threads(std::optional<int> flag, const RunConfig& cfg);

/// Column names of the CSV produced by an analysis. For a sweep these follow
/// the n, J, h, beta, alpha cell columns.
std::vector<std::string> columns_for(Analysis analysis);

/// Runs one analysis on the configured bath and system.
RunResult run(Analysis analysis, const RunConfig& cfg, int threads);

/// Cartesian product over the sweep lists (a missing list means the base
/// value). Cells run concurrently; rows come out ordered by cell index.
/// ConfigError when the cell count exceeds sweep.cap.
RunResult sweep(const RunConfig& cfg, int threads);

/// Metadata sidecar: resolved configuration, library version, schema.
nlohmann::ordered_json metadata(Analysis analysis, const RunConfig& cfg, const RunResult& result);

/// Writes the primary output (and the sidecar next to it when writing to a
/// file). An empty path writes the primary output to `fallback`. IoError on
/// failure.
void write_outputs(Analysis analysis, const RunConfig& cfg, const RunResult& result,
                   std::ostream& fallback);

/// Sidecar location for a primary output path.
std::string sidecar_path(const std::string& out_path);

}  // namespace spinbath::cli
