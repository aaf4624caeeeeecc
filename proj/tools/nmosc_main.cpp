#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nmosc/errors.hpp"
#include "nmosc/pipeline.hpp"
#include "nmosc/run_config.hpp"

namespace fs = std::filesystem;

namespace {

// NMOSC_OUT beats the config's outputs.directory
fs::path resolve_output_dir(const nmosc::RunConfig& config) {
  if (const char* env = std::getenv("NMOSC_OUT"); env != nullptr && *env != '\0')
    return fs::path(env);
  return fs::path(config.output_directory);
}

int run(const std::string& command, const std::string& config_path,
        const std::optional<std::string>& sweep_text) {
  const nmosc::RunConfig config = nmosc::parse_config_file(config_path);
  const fs::path out_dir = resolve_output_dir(config);

  if (command == "simulate") {
    auto artifacts = nmosc::run_simulate(config, out_dir);
    std::cout << "wrote " << artifacts.propagator_csv.string() << "\n"
              << "wrote " << artifacts.coefficients_csv.string() << "\n"
              << "wrote " << artifacts.report_txt.string() << "\n";
    for (const auto& plot : artifacts.plots) std::cout << "wrote " << plot.string() << "\n";
  } else if (command == "bound-state") {
    std::optional<nmosc::SweepSpec> sweep;
    if (sweep_text) sweep = nmosc::parse_sweep(*sweep_text);
    auto artifacts = nmosc::run_bound_state(config, sweep, out_dir);
    std::cout << "wrote " << artifacts.report_txt.string() << "\n";
    if (artifacts.sweep_csv) std::cout << "wrote " << artifacts.sweep_csv->string() << "\n";
  } else {
    auto artifacts = nmosc::run_oracle_compare(config, out_dir);
    std::cout << "wrote " << artifacts.table_csv.string() << "\n";
    for (std::size_t i = 0; i < artifacts.steps.size(); ++i)
      std::cout << "h=" << artifacts.steps[i] << " max_error=" << artifacts.max_errors[i] << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact reduced dynamics of an oscillator coupled to a bosonic bath"};
  app.require_subcommand(1);

  std::string config_path;
  std::string sweep_text;

  auto* simulate = app.add_subcommand("simulate", "solve u(t) and the master-equation coefficients");
  simulate->add_option("-c,--config", config_path, "run configuration file")->required();

  auto* bound = app.add_subcommand("bound-state", "stability and bound-state analysis");
  bound->add_option("-c,--config", config_path, "run configuration file")->required();
  auto* sweep_opt = bound->add_option("--sweep", sweep_text, "parameter sweep, e.g. alpha=0.01:3:100");

  auto* compare = app.add_subcommand("oracle-compare", "time stepping vs exact diagonalization");
  compare->add_option("-c,--config", config_path, "run configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // CLI11 prints its own diagnostics
  }

  std::string command = "simulate";
  if (bound->parsed()) command = "bound-state";
  if (compare->parsed()) command = "oracle-compare";

  try {
    std::optional<std::string> sweep;
    if (bound->parsed() && sweep_opt->count() > 0) sweep = sweep_text;
    return run(command, config_path, sweep);
  } catch (const nmosc::Error& e) {
    std::cerr << "nmosc: error: " << e.what() << "\n";
    return static_cast<int>(e.error_class());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "nmosc: io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "nmosc: error: " << e.what() << "\n";
    return 2;
  }
}
