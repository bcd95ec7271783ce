#include "qbm/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "qbm/microcoeffs.hpp"
#include "qbm/structure_factor.hpp"

namespace qbm::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15f", v);
  return buf;
}

// Collects summary lines, echoes them to stdout and keeps a copy on disk.
class Summary {
 public:
  explicit Summary(std::ostream& out) : out_(out) {}
  void add(const std::string& key, const std::string& value) {
    const std::string line = key + "=" + value + "\n";
    out_ << line;
    text_ += line;
  }
  void add(const std::string& key, double value) { add(key, fmt17(value)); }
  const std::string& text() const { return text_; }

 private:
  std::ostream& out_;
  std::string text_;
};

struct Outputs {
  fs::path data;
  fs::path meta;
  fs::path summary;
};

Outputs prepare(const fs::path& dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return {dir / (name + ".csv"), dir / (name + ".meta"), dir / (name + ".summary")};
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

void finish(const Outputs& o, const std::string& command, const RunConfig& cfg, const std::string& csv,
            const Summary& summary, double seconds) {
  write_file(o.data, csv);
  write_file(o.summary, summary.text());
  std::ostringstream meta;
  meta << "command = " << command << "\n"
       << "version = " << kVersion << "\n"
       << "generated_utc = " << utc_now() << "\n"
       << "wall_seconds = " << seconds << "\n"
       << "data = " << o.data.filename().string() << "\n"
       << "\n"
       << cfg.canonical();
  write_file(o.meta, meta.str());
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void csv_row(std::ostringstream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << fmt17(v);
    first = false;
  }
  os << '\n';
}

double variance_p(const OperatorMatrix& rho, const OperatorMatrix& p, const OperatorMatrix& p2) {
  const double m = expectation(rho, p).real();
  return expectation(rho, p2).real() - m * m;
}

}  // namespace

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void cmd_evolve(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
  const Stopwatch clock;
  const HilbertConfig hilbert = hilbert_from(cfg);
  const GeneratorSetup gen = generator_from(cfg, hilbert);
  const IntegratorConfig ic = integrator_from(cfg);
  const DensityMatrix rho0 = initial_state_from(cfg, hilbert);
  const double threshold = cfg.number("integrator", "breach_threshold", -1e-6);
  const Outputs o = prepare(out_dir, "evolve");

  const Superoperator l = build_generator(hilbert, gen.spec);
  const TrajectoryRecord rec = propagate(rho0, l, ic);

  std::ostringstream csv;
  csv << "t,trace,min_eig,purity,mean_x,mean_p,var_x,var_p\n";
  for (std::size_t i = 0; i < rec.size(); ++i)
    csv_row(csv, {rec.times[i], rec.trace[i], rec.min_eig[i], rec.purity[i], rec.mean_x[i], rec.mean_p[i],
                  rec.var_x[i], rec.var_p[i]});

  Summary s(out);
  const auto breach = positivity_breach_time(rec, threshold);
  s.add("positivity_breach_t", breach ? fmt17(*breach) : std::string("none"));
  s.add("min_eig_min", *std::min_element(rec.min_eig.begin(), rec.min_eig.end()));
  s.add("max_trace_drift", rec.max_trace_drift());
  s.add("max_herm_dev", rec.max_herm_dev());
  s.add("steps_accepted", std::to_string(rec.steps_accepted));
  s.add("steps_rejected", std::to_string(rec.steps_rejected));
  finish(o, "evolve", cfg, csv.str(), s, clock.seconds());
}

void cmd_coeffs(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
  const Stopwatch clock;
  const HilbertConfig hilbert = hilbert_from(cfg);
  const GasThermodynamics gas = gas_from(cfg);
  const TMatrixModel t = tmatrix_from(cfg);
  const Outputs o = prepare(out_dir, "coeffs");

  const CoefficientSet c = compute_dpp(t, gas, hilbert.mass, hilbert.hbar);
  const CpResult cp = cp_check(c, hilbert.hbar);
  const double chi = c.gamma > 0.0 ? chi_of(c, gas.beta, hilbert.mass, hilbert.hbar) : NAN;
  const double ratio = friction_ratio(gas);

  std::ostringstream csv;
  csv << "D_pp,D_xx,gamma,mu,chi,cp_margin,friction_ratio\n";
  csv << fmt17(c.D_pp) << ',' << fmt17(c.D_xx) << ',' << fmt17(c.gamma) << ',' << fmt17(c.mu) << ',' << fmt15(chi)
      << ',' << fmt17(cp.margin) << ',' << fmt17(ratio) << '\n';

  Summary s(out);
  s.add("D_pp", c.D_pp);
  s.add("D_xx", c.D_xx);
  s.add("gamma", c.gamma);
  s.add("mu", c.mu);
  s.add("chi", fmt15(chi));
  s.add("cp_margin", cp.margin);
  s.add("cp_satisfied", cp.satisfied ? "true" : "false");
  s.add("friction_ratio", ratio);
  s.add("statistics_prefactor", statistics_prefactor(gas));
  finish(o, "coeffs", cfg, csv.str(), s, clock.seconds());
}

void cmd_dsf(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
  const Stopwatch clock;
  const GasThermodynamics gas = gas_from(cfg);
  if (gas.statistics != Statistics::maxwell_boltzmann)
    throw ConfigError("gas.statistics must be mb: only the ideal Boltzmann gas has a closed form");
  const double q_min = cfg.number("dsf", "q_min", 0.2);
  const double q_max = cfg.number("dsf", "q_max", 5.0);
  const int n_q = cfg.integer("dsf", "n_q", 20);
  if (!(q_min > 0.0)) throw ConfigError("dsf.q_min must be > 0");
  if (!(q_max >= q_min)) throw ConfigError("dsf.q_max must be >= dsf.q_min");
  if (n_q < 1 || (n_q == 1 && q_max != q_min)) throw ConfigError("dsf.n_q must be >= 2 for a q range");
  const double e_default = q_max * q_max / (2.0 * gas.gas_mass) + 6.0 * q_max / std::sqrt(gas.beta * gas.gas_mass);
  const double e_max = cfg.number("dsf", "e_max", e_default);
  const double e_min = cfg.number("dsf", "e_min", -e_max);
  const int n_e = cfg.integer("dsf", "n_e", 41);
  if (!(e_max > e_min)) throw ConfigError("dsf.e_max must be > dsf.e_min");
  if (n_e < 2) throw ConfigError("dsf.n_e must be >= 2");
  const Outputs o = prepare(out_dir, "dsf");

  std::ostringstream csv;
  csv << "q,E,S\n";
  double worst_balance = 0.0;
  double worst_zeroth = 1.0, worst_f = 1.0;
  for (int i = 0; i < n_q; ++i) {
    const double q = n_q == 1 ? q_min : q_min + (q_max - q_min) * i / (n_q - 1);
    for (int j = 0; j < n_e; ++j) {
      const double e = e_min + (e_max - e_min) * j / (n_e - 1);
      const double s = s_mb(q, e, gas);
      csv_row(csv, {q, e, s});
      const double expected = std::exp(-gas.beta * e) * s;
      if (expected > 0.0 && std::isfinite(expected))
        worst_balance = std::max(worst_balance, std::abs(s_mb(q, -e, gas) - expected) / expected);
    }
    const double zeroth = sum_rule_zeroth(q, gas);
    const double f_ratio = sum_rule_f(q, gas) / (q * q / (2.0 * gas.gas_mass));
    if (std::abs(zeroth - 1.0) > std::abs(worst_zeroth - 1.0)) worst_zeroth = zeroth;
    if (std::abs(f_ratio - 1.0) > std::abs(worst_f - 1.0)) worst_f = f_ratio;
  }

  Summary s(out);
  s.add("sum_rule_0", worst_zeroth);
  s.add("sum_rule_f_ratio", worst_f);
  s.add("detailed_balance_max_rel", worst_balance);
  finish(o, "dsf", cfg, csv.str(), s, clock.seconds());
  if (worst_balance > 1e-12) throw NumericalError("detailed balance violated beyond 1e-12");
}

void cmd_fp(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
  const Stopwatch clock;
  const FPSetup f = fp_from(cfg);
  const Outputs o = prepare(out_dir, "fp");
  const FPSolution sol = fp_solve(f.grid, f.eta, f.D_v, f.t_final, f.dt, f.sample_stride);
  const FPTrajectory& m = sol.moments;

  std::ostringstream csv;
  csv << "t,mass,mean_v,var_v\n";
  double drift = 0.0;
  for (std::size_t i = 0; i < m.times.size(); ++i) {
    csv_row(csv, {m.times[i], m.mass[i], m.mean_v[i], m.var_v[i]});
    drift = std::max(drift, std::abs(m.mass[i] - m.mass.front()));
  }

  Summary s(out);
  s.add("stationary_var", sol.grid.variance());
  if (f.eta > 0.0) s.add("stationary_var_expected", f.D_v / f.eta);
  s.add("final_mean_v", sol.grid.mean());
  s.add("max_mass_drift", drift);
  s.add("min_p", *std::min_element(sol.grid.p.begin(), sol.grid.p.end()));
  finish(o, "fp", cfg, csv.str(), s, clock.seconds());
}

CompareResult run_compare(const RunConfig& cfg) {
  const HilbertConfig hilbert = hilbert_from(cfg);
  const GeneratorSetup gen = generator_from(cfg, hilbert);
  if (gen.spec.kind != GeneratorKind::minimal_qbm)
    throw ConfigError("generator.kind must be minimal_qbm for compare");
  IntegratorConfig ic = integrator_from(cfg);
  const DensityMatrix rho0 = initial_state_from(cfg, hilbert);
  const int n_samples = cfg.integer("compare", "n_samples", 40);
  const double eta_scale = cfg.number("compare", "eta_scale", 1.0);
  const int n_cells = cfg.integer("compare", "n_cells", 400);
  const double width = cfg.number("compare", "width_sigmas", 8.0);
  if (n_samples < 1) throw ConfigError("compare.n_samples must be >= 1");
  if (!(eta_scale >= 0.0)) throw ConfigError("compare.eta_scale must be >= 0");
  if (!(width > 0.0)) throw ConfigError("compare.width_sigmas must be > 0");

  // Matched classical problem: eta = 2 z gamma, D_v = z D_pp / M^2, so that
  // both sides share d var/dt = -2 eta var + 2 D_v.
  const double z = gen.dissipator_scale;
  const double M = hilbert.mass;
  const double eta = 2.0 * z * gen.coefficients.gamma * eta_scale;
  const double D_v = z * gen.coefficients.D_pp / (M * M);

  const OperatorMatrix p = build_momentum(hilbert);
  const OperatorMatrix p2 = p * p;
  const double mean_v = expectation(rho0, p).real() / M;
  const double var_v = variance_p(rho0.matrix(), p, p2) / (M * M);
  const double spread = eta > 0.0 ? std::max(var_v, D_v / eta) : var_v + 2.0 * D_v * ic.t_final;
  const double half = std::abs(mean_v) + width * std::sqrt(spread);
  FPGrid grid = FPGrid::gaussian(-half, half, n_cells, mean_v, var_v);
  const double stable = fp_stable_dt(grid, eta, D_v);

  const Superoperator l = build_generator(hilbert, gen.spec);
  const double t_final = ic.t_final;
  const double seg = t_final / n_samples;
  ic.t_final = seg;

  CompareResult r;
  OperatorMatrix rho = rho0.matrix();
  auto record = [&](double t) {
    const double q = variance_p(rho, p, p2);
    const double c = M * M * grid.variance();
    r.times.push_back(t);
    r.var_p_quantum.push_back(q);
    r.var_p_classical.push_back(c);
    r.max_rel_diff = std::max(r.max_rel_diff, std::abs(q - c) / std::abs(c));
    r.max_trace_drift = std::max(r.max_trace_drift, std::abs(rho.trace().real() - 1.0));
    r.max_herm_dev = std::max(r.max_herm_dev, hermiticity_deviation(rho));
  };
  record(0.0);
  for (int k = 1; k <= n_samples; ++k) {
    rho = propagate_state(rho, l, ic);
    const double dt = std::isfinite(stable) ? std::min(0.5 * stable, seg) : seg;
    grid = fp_solve(grid, eta, D_v, seg, dt, 1 << 30).grid;
    record(k == n_samples ? t_final : k * seg);
  }
  return r;
}

void cmd_compare(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
  const Stopwatch clock;
  const Outputs o = prepare(out_dir, "compare");
  const CompareResult r = run_compare(cfg);

  std::ostringstream csv;
  csv << "t,var_p_quantum,var_p_classical,rel_diff\n";
  for (std::size_t i = 0; i < r.times.size(); ++i)
    csv_row(csv, {r.times[i], r.var_p_quantum[i], r.var_p_classical[i],
                  std::abs(r.var_p_quantum[i] - r.var_p_classical[i]) / std::abs(r.var_p_classical[i])});

  Summary s(out);
  s.add("max_rel_diff", r.max_rel_diff);
  s.add("max_trace_drift", r.max_trace_drift);
  s.add("max_herm_dev", r.max_herm_dev);
  finish(o, "compare", cfg, csv.str(), s, clock.seconds());
}

}  // namespace qbm::cli
