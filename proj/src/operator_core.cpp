#include "qbm/operator_core.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qbm {

namespace {

bool all_finite(const OperatorMatrix& m) {
  return m.allFinite();
}

OperatorMatrix hermitian_part(const OperatorMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

}  // namespace

void HilbertConfig::validate() const {
  // Two levels is the smallest space with a nontrivial ladder operator;
  // moment checks need more headroom and pick their own dim.
  if (dim < 2) throw std::invalid_argument("hilbert.dim must be >= 2");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("hilbert.hbar must be > 0");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("hilbert.mass must be > 0");
  if (!(omega_basis > 0.0) || !std::isfinite(omega_basis))
    throw std::invalid_argument("hilbert.omega_basis must be > 0");
}

double HilbertConfig::length_scale() const {
  return std::sqrt(hbar / (mass * omega_basis));
}

double HilbertConfig::momentum_scale() const {
  return std::sqrt(hbar * mass * omega_basis);
}

OperatorMatrix build_identity(const HilbertConfig& cfg) {
  cfg.validate();
  return OperatorMatrix::Identity(cfg.dim, cfg.dim);
}

OperatorMatrix build_ladder(const HilbertConfig& cfg) {
  cfg.validate();
  OperatorMatrix a = OperatorMatrix::Zero(cfg.dim, cfg.dim);
  for (int n = 1; n < cfg.dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

OperatorMatrix build_number(const HilbertConfig& cfg) {
  cfg.validate();
  OperatorMatrix n = OperatorMatrix::Zero(cfg.dim, cfg.dim);
  for (int k = 0; k < cfg.dim; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

// x = l (a + a^dagger) / sqrt2, filled symmetrically so x is exactly Hermitian.
OperatorMatrix build_position(const HilbertConfig& cfg) {
  cfg.validate();
  const double c = cfg.length_scale() / std::sqrt(2.0);
  OperatorMatrix x = OperatorMatrix::Zero(cfg.dim, cfg.dim);
  for (int n = 1; n < cfg.dim; ++n) {
    const double v = c * std::sqrt(static_cast<double>(n));
    x(n - 1, n) = v;
    x(n, n - 1) = v;
  }
  return x;
}

// p = i (hbar / l) (a^dagger - a) / sqrt2
OperatorMatrix build_momentum(const HilbertConfig& cfg) {
  cfg.validate();
  const double c = cfg.momentum_scale() / std::sqrt(2.0);
  OperatorMatrix p = OperatorMatrix::Zero(cfg.dim, cfg.dim);
  for (int n = 1; n < cfg.dim; ++n) {
    const double v = c * std::sqrt(static_cast<double>(n));
    p(n, n - 1) = Complex(0.0, v);
    p(n - 1, n) = Complex(0.0, -v);
  }
  return p;
}

OperatorMatrix build_hamiltonian(const HilbertConfig& cfg, const HamiltonianKind& kind) {
  const OperatorMatrix p = build_momentum(cfg);
  OperatorMatrix h = (p * p) / (2.0 * cfg.mass);
  if (kind.type == HamiltonianKind::Type::harmonic) {
    if (!(kind.omega_trap > 0.0)) throw std::invalid_argument("omega_trap must be > 0");
    const OperatorMatrix x = build_position(cfg);
    h += 0.5 * cfg.mass * kind.omega_trap * kind.omega_trap * (x * x);
  }
  return hermitian_part(h);
}

double thermal_wavelength(const HilbertConfig& cfg, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  return std::sqrt(cfg.hbar * cfg.hbar * beta / cfg.mass);
}

OperatorMatrix build_annihilator(const HilbertConfig& cfg, double beta) {
  const double lambda = thermal_wavelength(cfg, beta);
  const OperatorMatrix x = build_position(cfg);
  const OperatorMatrix p = build_momentum(cfg);
  const Complex p_coeff(0.0, lambda * lambda / (4.0 * cfg.hbar));
  return (std::sqrt(2.0) / lambda) * (x + p_coeff * p);
}

DensityMatrix::DensityMatrix(OperatorMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0)
    throw std::invalid_argument("density matrix must be square and non-empty");
  if (!all_finite(rho_)) throw std::invalid_argument("density matrix has non-finite entries");
  if (hermiticity_deviation(rho_) > kHermitianTol)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > kTraceTol)
    throw std::invalid_argument("density matrix trace differs from 1");
  if (min_eigenvalue(rho_) < kPositivityTol)
    throw std::invalid_argument("density matrix is not positive semidefinite");
  // Store the exactly Hermitian representative; integrators rely on it.
  rho_ = hermitian_part(rho_);
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("zero state vector");
  const StateVector v = psi / norm;
  return DensityMatrix(hermitian_part(v * v.adjoint()));
}

Complex expectation(const OperatorMatrix& rho, const OperatorMatrix& a) {
  if (rho.rows() != a.rows() || rho.cols() != a.cols())
    throw std::invalid_argument("expectation: dimension mismatch");
  // Tr(rho A) = sum_ij rho_ij A_ji
  return (rho.array() * a.transpose().array()).sum();
}

Complex expectation(const DensityMatrix& rho, const OperatorMatrix& a) {
  return expectation(rho.matrix(), a);
}

double min_eigenvalue(const OperatorMatrix& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("min_eigenvalue: matrix not square");
  if (!all_finite(rho)) throw NumericalError("min_eigenvalue: non-finite entries");
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(hermitian_part(rho), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("min_eigenvalue: eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

double min_eigenvalue(const DensityMatrix& rho) {
  return min_eigenvalue(rho.matrix());
}

double hermiticity_deviation(const OperatorMatrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

void require_dim(const OperatorMatrix& a, int dim, const std::string& what) {
  if (a.rows() != dim || a.cols() != dim)
    throw std::invalid_argument(what + ": expected " + std::to_string(dim) + "x" +
                                std::to_string(dim) + " matrix");
}

}  // namespace qbm
