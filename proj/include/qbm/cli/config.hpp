#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include <boost/property_tree/ptree.hpp>

#include "qbm/classical_fp.hpp"
#include "qbm/liouvillians.hpp"
#include "qbm/propagation.hpp"

namespace qbm::cli {

/// Bad, missing or unknown configuration entry. The message names the key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// INI-style run configuration. Every section and key is checked against a
/// fixed schema on load; anything unrecognised is an error.
class RunConfig {
 public:
  static RunConfig from_file(const std::filesystem::path& path);
  static RunConfig from_string(const std::string& text);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  double number(const std::string& section, const std::string& key) const;
  double number(const std::string& section, const std::string& key, double fallback) const;
  int integer(const std::string& section, const std::string& key) const;
  int integer(const std::string& section, const std::string& key, int fallback) const;
  std::string text(const std::string& section, const std::string& key) const;
  std::string text(const std::string& section, const std::string& key, const std::string& fallback) const;

  /// Output directory: explicit override, then $QBM_OUTPUT_DIR, then
  /// [output] path, then the current directory.
  std::filesystem::path output_dir(const std::optional<std::string>& override_dir) const;

  /// Sections and keys in file order, for the metadata sidecar.
  std::string canonical() const;

  /// Accepted keys per section.
  static const std::map<std::string, std::set<std::string>>& schema();

 private:
  explicit RunConfig(boost::property_tree::ptree tree);
  std::optional<std::string> raw(const std::string& section, const std::string& key) const;

  boost::property_tree::ptree tree_;
};

HilbertConfig hilbert_from(const RunConfig& cfg);
GasThermodynamics gas_from(const RunConfig& cfg);
TMatrixModel tmatrix_from(const RunConfig& cfg);
IntegratorConfig integrator_from(const RunConfig& cfg);
DensityMatrix initial_state_from(const RunConfig& cfg, const HilbertConfig& hilbert);

/// Generator description plus the coefficient set it implies (for reports).
struct GeneratorSetup {
  LiouvillianSpec spec;
  CoefficientSet coefficients;
  /// Dissipator scale actually applied (fugacity or statistics prefactor).
  double dissipator_scale = 1.0;
};
GeneratorSetup generator_from(const RunConfig& cfg, const HilbertConfig& hilbert);

struct FPSetup {
  FPGrid grid;
  double eta = 0.0;
  double D_v = 0.0;
  double t_final = 0.0;
  double dt = 0.0;
  int sample_stride = 1;
};
FPSetup fp_from(const RunConfig& cfg);

}  // namespace qbm::cli
