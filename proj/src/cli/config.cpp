#include "qbm/cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "qbm/microcoeffs.hpp"
#include "qbm/states.hpp"
#include "qbm/structure_factor.hpp"

namespace qbm::cli {

namespace pt = boost::property_tree;

namespace {

std::string dotted(const std::string& section, const std::string& key) { return section + "." + key; }

void check_schema(const pt::ptree& tree) {
  const auto& schema = RunConfig::schema();
  for (const auto& [section, body] : tree) {
    const auto it = schema.find(section);
    if (it == schema.end()) {
      if (body.empty()) throw ConfigError("key '" + section + "' outside any section");
      throw ConfigError("unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!value.empty()) throw ConfigError("nested key under " + dotted(section, key));
      if (!it->second.count(key)) throw ConfigError("unknown key '" + dotted(section, key) + "'");
    }
  }
}

Statistics parse_statistics(const std::string& s) {
  if (s == "mb" || s == "boltzmann") return Statistics::maxwell_boltzmann;
  if (s == "bose") return Statistics::bose;
  if (s == "fermi") return Statistics::fermi;
  throw ConfigError("gas.statistics must be mb, bose or fermi, got '" + s + "'");
}

// Wraps a validation call so the message carries the offending section.
template <typename F>
auto in_section(const std::string& section, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("[" + section + "] " + e.what());
  }
}

}  // namespace

const std::map<std::string, std::set<std::string>>& RunConfig::schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"hilbert", {"dim", "hbar", "mass", "omega_basis"}},
      {"generator",
       {"kind", "hamiltonian", "omega_trap", "beta", "gamma", "mu", "D_pp", "D_xx", "D_xp", "fugacity_z"}},
      {"gas", {"beta", "gas_mass", "fugacity_z", "statistics"}},
      {"tmatrix", {"model", "t0", "sigma_q"}},
      {"collision", {"q_max", "n_nodes"}},
      {"initial", {"kind", "mean_x", "mean_p", "squeeze_r", "nbar", "level"}},
      {"integrator",
       {"method", "dt", "rtol", "atol", "dt_init", "t_final", "monitor_stride", "max_steps", "breach_threshold"}},
      {"fp",
       {"eta", "D_v", "mass", "beta", "v_min", "v_max", "n_cells", "mean", "variance", "t_final", "dt",
        "sample_stride"}},
      {"dsf", {"q_min", "q_max", "n_q", "e_min", "e_max", "n_e"}},
      {"compare", {"n_samples", "eta_scale", "n_cells", "width_sigmas"}},
      {"output", {"path"}},
  };
  return s;
}

RunConfig::RunConfig(pt::ptree tree) : tree_(std::move(tree)) { check_schema(tree_); }

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

RunConfig RunConfig::from_string(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.message() + " (line " +
                      std::to_string(e.line()) + ")");
  }
  return RunConfig(std::move(tree));
}

bool RunConfig::has_section(const std::string& section) const { return tree_.find(section) != tree_.not_found(); }

bool RunConfig::has(const std::string& section, const std::string& key) const { return raw(section, key).has_value(); }

std::optional<std::string> RunConfig::raw(const std::string& section, const std::string& key) const {
  const auto sec = tree_.find(section);
  if (sec == tree_.not_found()) return std::nullopt;
  const auto val = sec->second.find(key);
  if (val == sec->second.not_found()) return std::nullopt;
  return val->second.data();
}

double RunConfig::number(const std::string& section, const std::string& key) const {
  const auto v = raw(section, key);
  if (!v) throw ConfigError("missing key '" + dotted(section, key) + "'");
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(*v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || v->find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(d))
    throw ConfigError(dotted(section, key) + ": expected a finite number, got '" + *v + "'");
  return d;
}

double RunConfig::number(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

int RunConfig::integer(const std::string& section, const std::string& key) const {
  const double d = number(section, key);
  if (d != std::floor(d) || std::abs(d) > 2e9)
    throw ConfigError(dotted(section, key) + ": expected an integer, got '" + *raw(section, key) + "'");
  return static_cast<int>(d);
}

int RunConfig::integer(const std::string& section, const std::string& key, int fallback) const {
  return has(section, key) ? integer(section, key) : fallback;
}

std::string RunConfig::text(const std::string& section, const std::string& key) const {
  const auto v = raw(section, key);
  if (!v) throw ConfigError("missing key '" + dotted(section, key) + "'");
  return *v;
}

std::string RunConfig::text(const std::string& section, const std::string& key, const std::string& fallback) const {
  return has(section, key) ? text(section, key) : fallback;
}

std::filesystem::path RunConfig::output_dir(const std::optional<std::string>& override_dir) const {
  if (override_dir && !override_dir->empty()) return *override_dir;
  if (const char* env = std::getenv("QBM_OUTPUT_DIR"); env && *env) return env;
  if (has("output", "path")) return text("output", "path");
  return ".";
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  for (const auto& [section, body] : tree_) {
    os << "[" << section << "]\n";
    for (const auto& [key, value] : body) os << key << " = " << value.data() << "\n";
  }
  return os.str();
}

HilbertConfig hilbert_from(const RunConfig& cfg) {
  HilbertConfig h;
  h.dim = cfg.integer("hilbert", "dim", h.dim);
  h.hbar = cfg.number("hilbert", "hbar", h.hbar);
  h.mass = cfg.number("hilbert", "mass", h.mass);
  h.omega_basis = cfg.number("hilbert", "omega_basis", h.omega_basis);
  in_section("hilbert", [&] { h.validate(); });
  return h;
}

GasThermodynamics gas_from(const RunConfig& cfg) {
  GasThermodynamics g;
  g.beta = cfg.number("gas", "beta");
  g.gas_mass = cfg.number("gas", "gas_mass");
  g.fugacity = cfg.number("gas", "fugacity_z", 1.0);
  g.statistics = parse_statistics(cfg.text("gas", "statistics", "mb"));
  in_section("gas", [&] { g.validate(); });
  return g;
}

TMatrixModel tmatrix_from(const RunConfig& cfg) {
  const std::string model = cfg.text("tmatrix", "model", "constant");
  TMatrixModel t;
  if (model == "constant") {
    t = TMatrixModel::constant(cfg.number("tmatrix", "t0"));
    if (cfg.has("tmatrix", "sigma_q")) throw ConfigError("tmatrix.sigma_q is only used by model = gaussian");
  } else if (model == "gaussian") {
    t = TMatrixModel::gaussian(cfg.number("tmatrix", "t0"), cfg.number("tmatrix", "sigma_q"));
  } else {
    throw ConfigError("tmatrix.model must be constant or gaussian, got '" + model + "'");
  }
  in_section("tmatrix", [&] { t.validate(); });
  return t;
}

IntegratorConfig integrator_from(const RunConfig& cfg) {
  IntegratorConfig ic;
  const std::string method = cfg.text("integrator", "method", "rk45");
  if (method == "rk45")
    ic.method = IntegratorConfig::Method::rk45_adaptive;
  else if (method == "rk4")
    ic.method = IntegratorConfig::Method::rk4_fixed;
  else
    throw ConfigError("integrator.method must be rk45 or rk4, got '" + method + "'");
  ic.t_final = cfg.number("integrator", "t_final");
  if (ic.method == IntegratorConfig::Method::rk4_fixed) {
    ic.dt = cfg.number("integrator", "dt");
    for (const char* k : {"rtol", "atol", "dt_init"})
      if (cfg.has("integrator", k)) throw ConfigError(std::string("integrator.") + k + " is only used by rk45");
  } else {
    if (cfg.has("integrator", "dt")) throw ConfigError("integrator.dt is only used by rk4; use dt_init");
    ic.rtol = cfg.number("integrator", "rtol", ic.rtol);
    ic.atol = cfg.number("integrator", "atol", ic.atol);
    ic.dt_init = cfg.number("integrator", "dt_init", ic.dt_init);
  }
  ic.monitor_stride = cfg.integer("integrator", "monitor_stride", ic.monitor_stride);
  if (cfg.has("integrator", "max_steps")) ic.max_steps = cfg.integer("integrator", "max_steps");
  in_section("integrator", [&] { ic.validate(); });
  if (cfg.has("integrator", "breach_threshold") && !(cfg.number("integrator", "breach_threshold") < 0.0))
    throw ConfigError("integrator.breach_threshold must be < 0");
  return ic;
}

DensityMatrix initial_state_from(const RunConfig& cfg, const HilbertConfig& hilbert) {
  const std::string kind = cfg.text("initial", "kind", "gaussian");
  return in_section("initial", [&]() -> DensityMatrix {
    if (kind == "basis") {
      for (const char* k : {"mean_x", "mean_p", "squeeze_r", "nbar"})
        if (cfg.has("initial", k)) throw ConfigError(std::string("initial.") + k + " is not used by kind = basis");
      return DensityMatrix::from_pure(basis_state(hilbert, cfg.integer("initial", "level", 0)));
    }
    if (kind != "gaussian") throw ConfigError("initial.kind must be gaussian or basis, got '" + kind + "'");
    if (cfg.has("initial", "level")) throw ConfigError("initial.level is only used by kind = basis");
    const double mx = cfg.number("initial", "mean_x", 0.0);
    const double mp = cfg.number("initial", "mean_p", 0.0);
    const double r = cfg.number("initial", "squeeze_r", 0.0);
    const double nbar = cfg.number("initial", "nbar", 0.0);
    if (nbar == 0.0) return DensityMatrix::from_pure(gaussian_state(hilbert, mx, mp, r));
    return gaussian_mixed_state(hilbert, mx, mp, r, nbar);
  });
}

GeneratorSetup generator_from(const RunConfig& cfg, const HilbertConfig& hilbert) {
  GeneratorSetup g;
  LiouvillianSpec& s = g.spec;
  const std::string kind = cfg.text("generator", "kind");
  const std::string ham = cfg.text("generator", "hamiltonian", "free");
  if (ham == "harmonic") {
    s.hamiltonian = HamiltonianKind::harmonic(cfg.number("generator", "omega_trap"));
  } else if (ham == "free") {
    if (cfg.has("generator", "omega_trap")) throw ConfigError("generator.omega_trap requires hamiltonian = harmonic");
  } else {
    throw ConfigError("generator.hamiltonian must be free or harmonic, got '" + ham + "'");
  }

  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (cfg.has("generator", k))
        throw ConfigError(std::string("generator.") + k + " is not used by kind = " + kind);
  };

  if (kind == "unitary") {
    s.kind = GeneratorKind::unitary;
    forbid({"beta", "gamma", "mu", "D_pp", "D_xx", "D_xp", "fugacity_z"});
  } else if (kind == "caldeira_leggett") {
    s.kind = GeneratorKind::caldeira_leggett;
    forbid({"mu", "D_pp", "D_xx", "D_xp", "fugacity_z"});
    s.coeffs.gamma = cfg.number("generator", "gamma");
    s.beta = cfg.number("generator", "beta");
    g.coefficients.gamma = s.coeffs.gamma;
    g.coefficients.D_pp = 2.0 * hilbert.mass * s.coeffs.gamma / s.beta;
  } else if (kind == "bilinear") {
    s.kind = GeneratorKind::bilinear;
    forbid({"beta"});
    s.coeffs.gamma = cfg.number("generator", "gamma", 0.0);
    s.coeffs.mu = cfg.number("generator", "mu", 0.0);
    s.coeffs.D_pp = cfg.number("generator", "D_pp", 0.0);
    s.coeffs.D_xx = cfg.number("generator", "D_xx", 0.0);
    s.coeffs.D_xp = cfg.number("generator", "D_xp", 0.0);
    s.coeffs.fugacity_z = cfg.number("generator", "fugacity_z", 1.0);
    g.coefficients = {s.coeffs.D_pp, s.coeffs.D_xx, s.coeffs.D_xp, s.coeffs.gamma, s.coeffs.mu, 0.0,
                      Provenance::user};
    g.dissipator_scale = s.coeffs.fugacity_z;
  } else if (kind == "minimal_qbm") {
    s.kind = GeneratorKind::minimal_qbm;
    forbid({"gamma", "mu", "D_xx", "D_xp"});
    if (cfg.has("generator", "D_pp")) {
      s.coeffs.D_pp = cfg.number("generator", "D_pp");
      s.beta = cfg.number("generator", "beta");
      s.coeffs.fugacity_z = cfg.number("generator", "fugacity_z", 1.0);
    } else {
      // Microscopic coefficients from the gas and the T matrix.
      forbid({"beta", "fugacity_z"});
      const GasThermodynamics gas = gas_from(cfg);
      s.beta = gas.beta;
      s.coeffs.D_pp = compute_dpp(tmatrix_from(cfg), gas, hilbert.mass, hilbert.hbar).D_pp;
      s.coeffs.fugacity_z = statistics_prefactor(gas);
    }
    g.coefficients = in_section("generator", [&] { return minimal_qbm_coefficients(hilbert, s); });
    g.dissipator_scale = s.coeffs.fugacity_z;
  } else if (kind == "boltzmann_collision") {
    s.kind = GeneratorKind::boltzmann_collision;
    forbid({"beta", "gamma", "mu", "D_pp", "D_xx", "D_xp", "fugacity_z"});
    const GasThermodynamics gas = gas_from(cfg);
    if (gas.statistics != Statistics::maxwell_boltzmann)
      throw ConfigError("gas.statistics must be mb for kind = boltzmann_collision");
    const int n_nodes = cfg.integer("collision", "n_nodes", 16);
    if (n_nodes < 1) throw ConfigError("collision.n_nodes must be >= 1");
    s.collision = in_section("collision", [&] {
      return CollisionParameters::with_gauss_legendre(gas.gas_mass, gas.beta, gas.fugacity, tmatrix_from(cfg),
                                                      cfg.number("collision", "q_max"), n_nodes);
    });
    s.beta = gas.beta;
    g.coefficients = compute_dpp_on_rule(s.collision->tmatrix, gas, hilbert.mass, hilbert.hbar,
                                         s.collision->q_nodes, s.collision->q_weights);
    g.dissipator_scale = gas.fugacity;
  } else {
    throw ConfigError("generator.kind must be unitary, caldeira_leggett, bilinear, minimal_qbm or "
                      "boltzmann_collision, got '" + kind + "'");
  }
  if (s.kind == GeneratorKind::caldeira_leggett || s.kind == GeneratorKind::bilinear) {
    in_section("generator", [&] { s.coeffs.validate(); });
    if (s.kind == GeneratorKind::caldeira_leggett && !(s.beta > 0.0)) throw ConfigError("generator.beta must be > 0");
    if (s.coeffs.gamma < 0.0) throw ConfigError("generator.gamma must be >= 0");
  }
  return g;
}

FPSetup fp_from(const RunConfig& cfg) {
  FPSetup f;
  f.eta = cfg.number("fp", "eta");
  if (f.eta < 0.0) throw ConfigError("fp.eta must be >= 0");
  if (cfg.has("fp", "D_v")) {
    if (cfg.has("fp", "mass") || cfg.has("fp", "beta"))
      throw ConfigError("fp.D_v and fp.mass/fp.beta are mutually exclusive");
    f.D_v = cfg.number("fp", "D_v");
  } else {
    // Thermal relation D_v = eta / (M beta).
    const double mass = cfg.number("fp", "mass");
    const double beta = cfg.number("fp", "beta");
    if (!(mass > 0.0)) throw ConfigError("fp.mass must be > 0");
    if (!(beta > 0.0)) throw ConfigError("fp.beta must be > 0");
    f.D_v = f.eta / (mass * beta);
  }
  if (f.D_v < 0.0) throw ConfigError("fp.D_v must be >= 0");
  f.t_final = cfg.number("fp", "t_final");
  if (!(f.t_final > 0.0)) throw ConfigError("fp.t_final must be > 0");
  const double variance = cfg.number("fp", "variance");
  const double mean = cfg.number("fp", "mean", 0.0);
  if (!(variance > 0.0)) throw ConfigError("fp.variance must be > 0");

  double spread = variance;
  if (f.eta > 0.0) spread = std::max(spread, f.D_v / f.eta);
  else spread += 2.0 * f.D_v * f.t_final;
  const double half = std::abs(mean) + 8.0 * std::sqrt(spread);
  const double v_min = cfg.number("fp", "v_min", -half);
  const double v_max = cfg.number("fp", "v_max", half);
  const int n_cells = cfg.integer("fp", "n_cells", 400);
  f.grid = in_section("fp", [&] { return FPGrid::gaussian(v_min, v_max, n_cells, mean, variance); });

  const double stable = fp_stable_dt(f.grid, f.eta, f.D_v);
  f.dt = cfg.number("fp", "dt", std::isfinite(stable) ? 0.5 * stable : f.t_final);
  if (!(f.dt > 0.0)) throw ConfigError("fp.dt must be > 0");
  if (f.dt > stable) throw ConfigError("fp.dt violates the stability bound " + std::to_string(stable));
  const long steps = static_cast<long>(std::ceil(f.t_final / f.dt));
  f.sample_stride = cfg.integer("fp", "sample_stride", static_cast<int>(std::max(1L, steps / 500)));
  if (f.sample_stride < 1) throw ConfigError("fp.sample_stride must be >= 1");
  return f;
}

}  // namespace qbm::cli
