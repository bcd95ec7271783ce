#include "qbm/propagation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/SVD>

namespace qbm {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

class Monitor {
 public:
  Monitor(const Superoperator& l, TrajectoryRecord& rec) : rec_(rec) {
    x_ = build_position(l.config());
    p_ = build_momentum(l.config());
    x2_ = x_ * x_;
    p2_ = p_ * p_;
  }

  void sample(double t, const OperatorMatrix& rho) {
    const double mx = expectation(rho, x_).real();
    const double mp = expectation(rho, p_).real();
    rec_.times.push_back(t);
    rec_.trace.push_back(rho.trace().real());
    rec_.min_eig.push_back(min_eigenvalue(rho));
    rec_.purity.push_back(expectation(rho, rho).real());
    rec_.mean_x.push_back(mx);
    rec_.mean_p.push_back(mp);
    rec_.var_x.push_back(expectation(rho, x2_).real() - mx * mx);
    rec_.var_p.push_back(expectation(rho, p2_).real() - mp * mp);
    rec_.herm_dev.push_back(hermiticity_deviation(rho));
  }

 private:
  TrajectoryRecord& rec_;
  OperatorMatrix x_, p_, x2_, p2_;
};

void require_finite(const OperatorMatrix& rho, double t) {
  if (!rho.allFinite()) throw NumericalError("propagate: non-finite state at t = " + std::to_string(t));
}

// Stage evaluation. Every generator maps Hermitian matrices to Hermitian
// matrices, so for an exactly Hermitian initial state the stages are taken as
// (L[rho] + L[rho]^dagger)/2: identical in exact arithmetic, and it keeps
// rounding seeds out of the stiff anti-Hermitian modes that the error
// controller would otherwise let grow to the tolerance level.
class Rhs {
 public:
  Rhs(const Superoperator& l, bool hermitian) : l_(l), hermitian_(hermitian) {
    scratch_.resize(l.dim(), l.dim());
  }

  void operator()(const OperatorMatrix& rho, OperatorMatrix& out) {
    l_.apply_into(rho, out, scratch_);
    if (hermitian_) {
      scratch_ = out.adjoint();
      out += scratch_;
      out *= 0.5;
    }
  }

 private:
  const Superoperator& l_;
  bool hermitian_;
  OperatorMatrix scratch_;
};

// Drives either integrator and reports every accepted step to on_step(t, rho).
template <typename OnStep>
void integrate(const OperatorMatrix& rho0, const Superoperator& l, const IntegratorConfig& icfg,
               TrajectoryRecord& stats, OperatorMatrix& rho, OnStep&& on_step) {
  icfg.validate();
  require_dim(rho0, l.dim(), "propagate");
  rho = rho0;
  const int n = l.dim();
  Rhs rhs(l, rho0.allFinite() && hermiticity_deviation(rho0) == 0.0);
  OperatorMatrix tmp(n, n);
  std::array<OperatorMatrix, 7> k;
  for (auto& m : k) m.resize(n, n);

  double t = 0.0;
  const double tf = icfg.t_final;

  if (icfg.method == IntegratorConfig::Method::rk4_fixed) {
    const long steps = std::max(1L, static_cast<long>(std::ceil(tf / icfg.dt - 1e-9)));
    for (long s = 0; s < steps; ++s) {
      const double h = (s + 1 == steps) ? tf - t : icfg.dt;
      rhs(rho, k[0]);
      tmp = rho + (0.5 * h) * k[0];
      rhs(tmp, k[1]);
      tmp = rho + (0.5 * h) * k[1];
      rhs(tmp, k[2]);
      tmp = rho + h * k[2];
      rhs(tmp, k[3]);
      rho += (h / 6.0) * (k[0] + 2.0 * k[1] + 2.0 * k[2] + k[3]);
      t = (s + 1 == steps) ? tf : t + h;
      require_finite(rho, t);
      ++stats.steps_accepted;
      on_step(t, rho, s + 1 == steps);
    }
    return;
  }

  double h = std::min(icfg.dt_init, tf);
  OperatorMatrix y_new(n, n), err(n, n);
  rhs(rho, k[0]);  // first-same-as-last
  long total = 0;
  while (t < tf) {
    if (++total > icfg.max_steps)
      throw NumericalError("propagate: step budget exhausted at t = " + std::to_string(t));
    bool last = false;
    if (t + h >= tf) {
      h = tf - t;
      last = true;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw NumericalError("propagate: step size underflow at t = " + std::to_string(t));

    tmp = rho + (h * a21) * k[0];
    rhs(tmp, k[1]);
    tmp = rho + h * (a31 * k[0] + a32 * k[1]);
    rhs(tmp, k[2]);
    tmp = rho + h * (a41 * k[0] + a42 * k[1] + a43 * k[2]);
    rhs(tmp, k[3]);
    tmp = rho + h * (a51 * k[0] + a52 * k[1] + a53 * k[2] + a54 * k[3]);
    rhs(tmp, k[4]);
    tmp = rho + h * (a61 * k[0] + a62 * k[1] + a63 * k[2] + a64 * k[3] + a65 * k[4]);
    rhs(tmp, k[5]);
    y_new = rho + h * (b1 * k[0] + b3 * k[2] + b4 * k[3] + b5 * k[4] + b6 * k[5]);
    rhs(y_new, k[6]);
    err = h * (e1 * k[0] + e3 * k[2] + e4 * k[3] + e5 * k[4] + e6 * k[5] + e7 * k[6]);

    double sum = 0.0;
    for (Eigen::Index j = 0; j < err.size(); ++j) {
      const double scale =
          icfg.atol + icfg.rtol * std::max(std::abs(rho.data()[j]), std::abs(y_new.data()[j]));
      const double r = std::abs(err.data()[j]) / scale;
      sum += r * r;
    }
    const double norm = std::sqrt(sum / static_cast<double>(err.size()));
    if (!std::isfinite(norm)) throw NumericalError("propagate: non-finite error estimate at t = " + std::to_string(t));

    if (norm <= 1.0) {
      t = last ? tf : t + h;
      rho.swap(y_new);
      k[0].swap(k[6]);
      require_finite(rho, t);
      ++stats.steps_accepted;
      on_step(t, rho, last);
      const double factor = norm == 0.0 ? kMaxFactor : std::clamp(kSafety * std::pow(norm, -0.2), kMinFactor, kMaxFactor);
      h *= factor;
    } else {
      ++stats.steps_rejected;
      h *= std::max(kMinFactor, kSafety * std::pow(norm, -0.2));
    }
  }
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("integrator.t_final must be > 0");
  if (monitor_stride < 1) throw std::invalid_argument("integrator.monitor_stride must be >= 1");
  if (method == Method::rk4_fixed) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrator.dt must be > 0");
  } else {
    if (!(rtol > 0.0)) throw std::invalid_argument("integrator.rtol must be > 0");
    if (!(atol > 0.0)) throw std::invalid_argument("integrator.atol must be > 0");
    if (!(dt_init > 0.0)) throw std::invalid_argument("integrator.dt_init must be > 0");
  }
}

double TrajectoryRecord::max_trace_drift() const {
  double d = 0.0;
  for (double tr : trace) d = std::max(d, std::abs(tr - trace.front()));
  return d;
}

double TrajectoryRecord::max_herm_dev() const {
  return herm_dev.empty() ? 0.0 : *std::max_element(herm_dev.begin(), herm_dev.end());
}

TrajectoryRecord propagate(const DensityMatrix& rho0, const Superoperator& l, const IntegratorConfig& icfg) {
  TrajectoryRecord rec;
  Monitor monitor(l, rec);
  monitor.sample(0.0, rho0.matrix());
  long since_sample = 0;
  OperatorMatrix rho;
  integrate(rho0.matrix(), l, icfg, rec, rho, [&](double t, const OperatorMatrix& state, bool last) {
    if (++since_sample >= icfg.monitor_stride || last) {
      monitor.sample(t, state);
      since_sample = 0;
    }
  });
  rec.final_state = rho;
  return rec;
}

OperatorMatrix propagate_state(const OperatorMatrix& rho0, const Superoperator& l, const IntegratorConfig& icfg) {
  TrajectoryRecord stats;
  OperatorMatrix rho;
  integrate(rho0, l, icfg, stats, rho, [](double, const OperatorMatrix&, bool) {});
  return rho;
}

std::optional<double> positivity_breach_time(const TrajectoryRecord& rec, double threshold) {
  for (std::size_t i = 0; i < rec.size(); ++i)
    if (rec.min_eig[i] < threshold) return rec.times[i];
  return std::nullopt;
}

OperatorMatrix stationary_state(const Eigen::MatrixXcd& l_matrix) {
  const Eigen::Index n2 = l_matrix.rows();
  if (n2 != l_matrix.cols()) throw std::invalid_argument("stationary_state: matrix not square");
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n2))));
  if (static_cast<Eigen::Index>(n) * n != n2) throw std::invalid_argument("stationary_state: size is not dim^2");
  if (n2 > 10000) throw std::invalid_argument("stationary_state: dim^2 exceeds 10^4");

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(l_matrix, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();  // descending
  const double scale = s(0);
  if (!(scale > 0.0)) throw NumericalError("stationary_state: zero generator, every state is stationary");
  if (n2 > 1 && s(n2 - 2) <= 1e-9 * scale)
    throw NumericalError("stationary_state: degenerate null space (second singular value " +
                         std::to_string(s(n2 - 2) / scale) + " relative)");

  const Eigen::VectorXcd v = svd.matrixV().col(n2 - 1);
  OperatorMatrix rho = Eigen::Map<const OperatorMatrix>(v.data(), n, n);
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-300) throw NumericalError("stationary_state: traceless null vector");
  rho /= tr;
  rho = (0.5 * (rho + rho.adjoint())).eval();
  const Eigen::VectorXcd residual = l_matrix * Eigen::Map<const Eigen::VectorXcd>(rho.data(), n2);
  if (residual.cwiseAbs().maxCoeff() > 1e-8)
    throw NumericalError("stationary_state: residual exceeds 1e-8");
  return rho;
}

}  // namespace qbm
