#pragma once

#include <vector>

namespace qbm {

/// Cell-centred velocity distribution on [v_min, v_max].
struct FPGrid {
  double v_min = -1.0;
  double v_max = 1.0;
  int n_cells = 0;
  std::vector<double> p;

  double dv() const { return (v_max - v_min) / n_cells; }
  double center(int i) const { return v_min + (i + 0.5) * dv(); }
  double face(int i) const { return v_min + i * dv(); }  // left face of cell i

  double mass() const;
  double mean() const;
  double variance() const;

  void validate() const;

  /// Sampled Gaussian, normalized so that sum p dv = 1.
  static FPGrid gaussian(double v_min, double v_max, int n_cells, double mean, double variance);
};

/// Largest dt accepted by fp_step: 0.4 min(dv^2 / (2 D_v), dv / (eta v_max)).
double fp_stable_dt(const FPGrid& grid, double eta, double D_v);

/// Chang-Cooper weight delta(w) = 1/w - 1/(e^w - 1), w = eta v dv / D_v.
double chang_cooper_delta(double w);

/// One explicit step of dp/dt = d/dv [eta v p + D_v dp/dv] in flux form with
/// zero-flux boundaries. The sampled Maxwellian exp(-eta v^2 / 2 D_v) is an
/// exact discrete steady state.
FPGrid fp_step(const FPGrid& grid, double eta, double D_v, double dt);

struct FPTrajectory {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> mean_v;
  std::vector<double> var_v;
};

struct FPSolution {
  FPGrid grid;
  FPTrajectory moments;
};

/// Repeated fp_step to t_final (last step shortened to land on t_final);
/// moments sampled at t = 0, every sample_stride steps and at t_final.
FPSolution fp_solve(const FPGrid& grid, double eta, double D_v, double t_final, double dt,
                    int sample_stride = 1);

}  // namespace qbm
