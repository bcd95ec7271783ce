#include "qbm/classical_fp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qbm {

namespace {

void require_coefficients(double eta, double D_v) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("fp.eta must be >= 0");
  if (!(D_v >= 0.0) || !std::isfinite(D_v)) throw std::invalid_argument("fp.D_v must be >= 0");
}

// Writes the interior face fluxes F_{i+1/2}, i = 0..n-2, into flux.
void face_fluxes(const FPGrid& g, double eta, double D_v, std::vector<double>& flux) {
  const int n = g.n_cells;
  const double dv = g.dv();
  flux.assign(n > 0 ? n - 1 : 0, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    const double v = g.face(i + 1);
    double delta;
    if (D_v > 0.0) {
      delta = chang_cooper_delta(eta * v * dv / D_v);
    } else {
      delta = v > 0.0 ? 0.0 : (v < 0.0 ? 1.0 : 0.5);
    }
    const double drift = eta * v * ((1.0 - delta) * g.p[i + 1] + delta * g.p[i]);
    const double diffusion = D_v * (g.p[i + 1] - g.p[i]) / dv;
    flux[i] = -(drift + diffusion);
  }
}

void step_in_place(FPGrid& g, double eta, double D_v, double dt, std::vector<double>& flux) {
  face_fluxes(g, eta, D_v, flux);
  const double r = dt / g.dv();
  const int n = g.n_cells;
  for (int i = 0; i < n; ++i) {
    const double in = i > 0 ? flux[i - 1] : 0.0;
    const double out = i + 1 < n ? flux[i] : 0.0;
    g.p[i] += r * (in - out);
  }
}

void sample(const FPGrid& g, double t, FPTrajectory& m) {
  m.times.push_back(t);
  m.mass.push_back(g.mass());
  m.mean_v.push_back(g.mean());
  m.var_v.push_back(g.variance());
}

}  // namespace

double FPGrid::mass() const {
  return std::accumulate(p.begin(), p.end(), 0.0) * dv();
}

double FPGrid::mean() const {
  double s = 0.0;
  for (int i = 0; i < n_cells; ++i) s += center(i) * p[i];
  return s * dv() / mass();
}

double FPGrid::variance() const {
  const double m = mean();
  double s = 0.0;
  for (int i = 0; i < n_cells; ++i) {
    const double d = center(i) - m;
    s += d * d * p[i];
  }
  return s * dv() / mass();
}

void FPGrid::validate() const {
  if (!(v_min < 0.0 && 0.0 < v_max)) throw std::invalid_argument("fp grid must satisfy v_min < 0 < v_max");
  if (n_cells < 3) throw std::invalid_argument("fp.n_cells must be >= 3");
  if (static_cast<int>(p.size()) != n_cells) throw std::invalid_argument("fp grid: p has wrong size");
  for (double v : p)
    if (!std::isfinite(v)) throw std::invalid_argument("fp grid: non-finite density");
}

FPGrid FPGrid::gaussian(double v_min, double v_max, int n_cells, double mean, double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("fp initial variance must be > 0");
  FPGrid g{v_min, v_max, n_cells, std::vector<double>(std::max(n_cells, 0), 0.0)};
  g.validate();
  for (int i = 0; i < n_cells; ++i) {
    const double d = g.center(i) - mean;
    g.p[i] = std::exp(-0.5 * d * d / variance);
  }
  const double norm = g.mass();
  if (!(norm > 0.0)) throw std::invalid_argument("fp initial Gaussian has no weight on the grid");
  for (double& v : g.p) v /= norm;
  return g;
}

double fp_stable_dt(const FPGrid& grid, double eta, double D_v) {
  require_coefficients(eta, D_v);
  const double dv = grid.dv();
  double bound = std::numeric_limits<double>::infinity();
  if (D_v > 0.0) bound = std::min(bound, dv * dv / (2.0 * D_v));
  const double vmax = std::max(std::abs(grid.v_min), std::abs(grid.v_max));
  if (eta > 0.0) bound = std::min(bound, dv / (eta * vmax));
  return 0.4 * bound;
}

double chang_cooper_delta(double w) {
  if (std::abs(w) < 1e-3) return 0.5 - w / 12.0 + w * w * w / 720.0;
  if (w > 700.0) return 1.0 / w;
  return 1.0 / w - 1.0 / std::expm1(w);
}

FPGrid fp_step(const FPGrid& grid, double eta, double D_v, double dt) {
  grid.validate();
  require_coefficients(eta, D_v);
  if (!(dt > 0.0)) throw std::invalid_argument("fp.dt must be > 0");
  const double limit = fp_stable_dt(grid, eta, D_v);
  if (dt > limit * (1.0 + 1e-12))
    throw std::invalid_argument("fp.dt = " + std::to_string(dt) + " violates the stability bound " +
                                std::to_string(limit));
  FPGrid next = grid;
  std::vector<double> flux;
  step_in_place(next, eta, D_v, dt, flux);
  return next;
}

FPSolution fp_solve(const FPGrid& grid, double eta, double D_v, double t_final, double dt, int sample_stride) {
  grid.validate();
  require_coefficients(eta, D_v);
  if (!(t_final > 0.0)) throw std::invalid_argument("fp.t_final must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("fp.dt must be > 0");
  if (sample_stride < 1) throw std::invalid_argument("fp.sample_stride must be >= 1");
  const double limit = fp_stable_dt(grid, eta, D_v);
  if (dt > limit * (1.0 + 1e-12))
    throw std::invalid_argument("fp.dt = " + std::to_string(dt) + " violates the stability bound " +
                                std::to_string(limit));

  FPSolution sol{grid, {}};
  sample(sol.grid, 0.0, sol.moments);
  const long steps = std::max(1L, static_cast<long>(std::ceil(t_final / dt - 1e-9)));
  std::vector<double> flux;
  double t = 0.0;
  for (long s = 1; s <= steps; ++s) {
    const bool last = s == steps;
    const double h = last ? t_final - t : dt;
    step_in_place(sol.grid, eta, D_v, h, flux);
    t = last ? t_final : t + h;
    if (last || s % sample_stride == 0) sample(sol.grid, t, sol.moments);
  }
  return sol;
}

}  // namespace qbm
