#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <spinbath/common.hpp>
#include <spinbath/version.hpp>

#include "spinbath_cli/config.hpp"
#include "spinbath_cli/run.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kNumeric = 3, kIo = 4 };

}  // namespace

int main(int argc, char** argv) {
  using namespace spinbath::cli;

  CLI::App app{"Central-qubit dephasing against a thermal Ising ring"};
  app.set_version_flag("--version", spinbath::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;
  std::optional<int> threads;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"decoherence", "decoherence function over the time grid"},
      {"lee-yang", "Lee-Yang zeros and the critical times they predict"},
      {"trace-distance", "trace distance of the |+>, |-> pair and its rate"},
      {"cpf", "conditional past-future correlation, formula and exact oracle"},
      {"pip", "partial information plot, one curve per beta and time"},
      {"sbs", "spectrum broadcast structure diagnostics over the time grid"},
      {"purity", "bath purity per beta"},
      {"sweep", "Cartesian parameter sweep of one analysis"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "YAML run configuration");
    sub->add_option("--out", out_path, "output path (standard output if omitted)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg = config_path.empty() ? parse_config("") : load_config(config_path);
    if (!out_path.empty()) cfg.out_path = out_path;
    if (!format.empty()) cfg.format = format == "json" ? Format::json : Format::csv;
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';

    const Analysis analysis = parse_analysis(command);
    const int workers = resolve_threads(threads, cfg);
    const RunResult result = run(analysis, cfg, workers);
    write_outputs(analysis, cfg, result, std::cout);
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const spinbath::InvalidArgument& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const spinbath::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kNumeric;
  }
}
