#pragma once

#include <optional>
#include <vector>

#include "qbm/liouvillians.hpp"
#include "qbm/operator_core.hpp"

namespace qbm {

struct IntegratorConfig {
  enum class Method { rk4_fixed, rk45_adaptive };
  Method method = Method::rk45_adaptive;
  double dt = 1e-3;        // rk4_fixed step
  double rtol = 1e-8;      // rk45_adaptive
  double atol = 1e-10;
  double dt_init = 1e-3;
  double t_final = 1.0;
  int monitor_stride = 1;  // accepted steps between monitor samples
  long max_steps = 10'000'000;

  void validate() const;
};

/// Monitor time series. final_state is recorded as integrated: no trace
/// renormalization or positivity projection is ever applied.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> trace;
  std::vector<double> min_eig;
  std::vector<double> purity;
  std::vector<double> mean_x;
  std::vector<double> mean_p;
  std::vector<double> var_x;
  std::vector<double> var_p;
  std::vector<double> herm_dev;  // max |rho - rho^dagger|
  OperatorMatrix final_state;
  long steps_accepted = 0;
  long steps_rejected = 0;

  std::size_t size() const { return times.size(); }
  double max_trace_drift() const;
  double max_herm_dev() const;
};

/// Integrates d rho/dt = L[rho] from t = 0 to icfg.t_final. Monitors are
/// sampled at t = 0, every monitor_stride accepted steps and at t_final.
/// An exactly Hermitian initial state stays exactly Hermitian (stages are
/// evaluated in Hermitian form). Throws NumericalError on step-size underflow
/// or a non-finite state.
TrajectoryRecord propagate(const DensityMatrix& rho0, const Superoperator& l, const IntegratorConfig& icfg);

/// Integrates without monitors and returns the final state.
OperatorMatrix propagate_state(const OperatorMatrix& rho0, const Superoperator& l, const IntegratorConfig& icfg);

/// First sampled time with min_eig < threshold.
std::optional<double> positivity_breach_time(const TrajectoryRecord& rec, double threshold);

/// Unit-trace Hermitian null vector of a superoperator matrix. Throws
/// NumericalError when the null space is degenerate or the residual
/// max|L[rho]| exceeds 1e-8.
OperatorMatrix stationary_state(const Eigen::MatrixXcd& l_matrix);

}  // namespace qbm
