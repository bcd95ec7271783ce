#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qbm/cli/commands.hpp"
#include "qbm/cli/config.hpp"
#include "qbm/operator_core.hpp"

namespace {

using Command = std::function<void(const qbm::cli::RunConfig&, const std::filesystem::path&, std::ostream&)>;

struct Invocation {
  std::string config;
  std::string output;
};

}  // namespace

int main(int argc, char** argv) {
  using namespace qbm::cli;
  CLI::App app{"Open-system dynamics of a heavy particle in a dilute gas"};
  app.require_subcommand(1);

  const std::map<std::string, std::pair<std::string, Command>> commands = {
      {"evolve", {"Propagate a density matrix and write the trajectory", cmd_evolve}},
      {"coeffs", {"Compute microscopic diffusion and friction coefficients", cmd_coeffs}},
      {"dsf", {"Tabulate the ideal-gas dynamic structure factor", cmd_dsf}},
      {"fp", {"Solve the classical velocity Fokker-Planck equation", cmd_fp}},
      {"compare", {"Compare quantum and classical momentum variances", cmd_compare}},
  };

  std::map<std::string, Invocation> args;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    Invocation& inv = args[name];
    sub->add_option("-c,--config", inv.config, "INI configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", inv.output, "Output directory (overrides QBM_OUTPUT_DIR and [output] path)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  for (const auto& [name, entry] : commands) {
    if (!app.got_subcommand(name)) continue;
    const Invocation& inv = args[name];
    try {
      const RunConfig cfg = RunConfig::from_file(inv.config);
      const auto dir = cfg.output_dir(inv.output.empty() ? std::nullopt : std::optional<std::string>(inv.output));
      entry.second(cfg, dir, std::cout);
      return kOk;
    } catch (const qbm::NumericalError& e) {
      std::cerr << "numerical error: " << e.what() << "\n";
      return kNumericalError;
    } catch (const std::invalid_argument& e) {
      std::cerr << "configuration error: " << e.what() << "\n";
      return kConfigError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kNumericalError;
    }
  }
  return kConfigError;
}
