#pragma once

#include <filesystem>
#include <iosfwd>

#include "qbm/cli/config.hpp"

namespace qbm::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3 };

/// Each command writes <name>.csv (data only, 17 significant digits) and
/// <name>.meta (run metadata) into out_dir, and prints key=value summary
/// lines to out. Errors propagate as ConfigError / std::invalid_argument
/// (exit 2) or NumericalError (exit 3).
void cmd_evolve(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out);
void cmd_coeffs(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out);
void cmd_dsf(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out);
void cmd_fp(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out);
void cmd_compare(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out);

/// Largest |var_p_quantum - var_p_classical| / var_p_classical over the
/// comparison grid, as computed by cmd_compare.
struct CompareResult {
  std::vector<double> times;
  std::vector<double> var_p_quantum;
  std::vector<double> var_p_classical;
  double max_rel_diff = 0.0;
  double max_trace_drift = 0.0;
  double max_herm_dev = 0.0;
};
CompareResult run_compare(const RunConfig& cfg);

/// Formats with 17 significant digits.
std::string fmt17(double v);

}  // namespace qbm::cli
