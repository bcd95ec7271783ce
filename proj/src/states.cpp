#include "qbm/states.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace qbm {

StateVector basis_state(const HilbertConfig& cfg, int n) {
  cfg.validate();
  if (n < 0 || n >= cfg.dim) throw std::invalid_argument("basis_state: level out of range");
  StateVector v = StateVector::Zero(cfg.dim);
  v(n) = 1.0;
  return v;
}

StateVector coherent_state(const HilbertConfig& cfg, Complex alpha) {
  cfg.validate();
  StateVector v(cfg.dim);
  Complex c = 1.0;
  for (int n = 0; n < cfg.dim; ++n) {
    if (n > 0) c *= alpha / std::sqrt(static_cast<double>(n));
    v(n) = c;
  }
  return v / v.norm();
}

StateVector gaussian_state(const HilbertConfig& cfg, double mean_x, double mean_p, double squeeze_r) {
  cfg.validate();
  // Work with headroom so the truncation of the final vector is the only
  // approximation.
  HilbertConfig big = cfg;
  big.dim = cfg.dim + 60;
  const OperatorMatrix a = build_ladder(big);
  const OperatorMatrix ad = a.adjoint();

  const double l = cfg.length_scale();
  const Complex alpha(mean_x / (std::sqrt(2.0) * l), mean_p * l / (std::sqrt(2.0) * cfg.hbar));

  const OperatorMatrix squeeze_gen = 0.5 * squeeze_r * (a * a - ad * ad);
  const OperatorMatrix displace_gen = alpha * ad - std::conj(alpha) * a;
  StateVector vac = StateVector::Zero(big.dim);
  vac(0) = 1.0;
  const StateVector full = displace_gen.exp() * (squeeze_gen.exp() * vac);
  StateVector v = full.head(cfg.dim);
  if (!v.allFinite() || v.norm() == 0.0) throw NumericalError("gaussian_state: construction failed");
  return v / v.norm();
}

DensityMatrix gaussian_mixed_state(const HilbertConfig& cfg, double mean_x, double mean_p, double squeeze_r,
                                   double nbar) {
  cfg.validate();
  if (!(nbar >= 0.0)) throw std::invalid_argument("gaussian_mixed_state: nbar must be >= 0");
  HilbertConfig big = cfg;
  big.dim = cfg.dim + 60;
  const OperatorMatrix a = build_ladder(big);
  const OperatorMatrix ad = a.adjoint();
  const double l = cfg.length_scale();
  const Complex alpha(mean_x / (std::sqrt(2.0) * l), mean_p * l / (std::sqrt(2.0) * cfg.hbar));
  const OperatorMatrix u = (alpha * ad - std::conj(alpha) * a).exp() * (0.5 * squeeze_r * (a * a - ad * ad)).exp();

  Eigen::VectorXd occupation(big.dim);
  const double ratio = nbar / (nbar + 1.0);
  double w = 1.0 / (nbar + 1.0);
  for (int n = 0; n < big.dim; ++n) {
    occupation(n) = w;
    w *= ratio;
  }
  const OperatorMatrix full = u * occupation.cast<Complex>().asDiagonal() * u.adjoint();
  OperatorMatrix rho = full.topLeftCorner(cfg.dim, cfg.dim);
  if (!rho.allFinite()) throw NumericalError("gaussian_mixed_state: construction failed");
  rho = (0.5 * (rho + rho.adjoint())).eval();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

DensityMatrix gibbs_state(const OperatorMatrix& h, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("gibbs_state: beta must be > 0");
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(0.5 * (h + h.adjoint()));
  if (solver.info() != Eigen::Success) throw NumericalError("gibbs_state: eigensolver failed");
  const Eigen::VectorXd e = solver.eigenvalues();
  Eigen::VectorXd w = (-beta * (e.array() - e.minCoeff())).exp();
  w /= w.sum();
  const OperatorMatrix& u = solver.eigenvectors();
  OperatorMatrix rho = u * w.cast<Complex>().asDiagonal() * u.adjoint();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

DensityMatrix maximally_mixed(const HilbertConfig& cfg) {
  cfg.validate();
  return DensityMatrix(OperatorMatrix::Identity(cfg.dim, cfg.dim) / static_cast<double>(cfg.dim));
}

}  // namespace qbm
