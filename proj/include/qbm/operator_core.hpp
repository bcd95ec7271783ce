#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qbm {

using Complex = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Raised when an integration, eigensolve or quadrature cannot produce a
/// finite answer. Configuration errors use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncated harmonic-oscillator number basis. omega_basis only fixes the
/// length scale of the basis; physical predictions must not depend on it
/// beyond truncation error.
struct HilbertConfig {
  int dim = 40;
  double hbar = 1.0;
  double mass = 1.0;
  double omega_basis = 1.0;

  void validate() const;

  /// sqrt(hbar / (M omega_basis))
  double length_scale() const;
  /// sqrt(hbar M omega_basis)
  double momentum_scale() const;
};

struct HamiltonianKind {
  enum class Type { free, harmonic };
  Type type = Type::free;
  double omega_trap = 0.0;

  static HamiltonianKind free_particle() { return {}; }
  static HamiltonianKind harmonic(double omega) { return {Type::harmonic, omega}; }
};

OperatorMatrix build_identity(const HilbertConfig& cfg);
/// Basis annihilation operator, a|n> = sqrt(n)|n-1>.
OperatorMatrix build_ladder(const HilbertConfig& cfg);
OperatorMatrix build_number(const HilbertConfig& cfg);
OperatorMatrix build_position(const HilbertConfig& cfg);
OperatorMatrix build_momentum(const HilbertConfig& cfg);
OperatorMatrix build_hamiltonian(const HilbertConfig& cfg, const HamiltonianKind& kind);

/// a = (sqrt2 / lambda_M) (x + i lambda_M^2 / (4 hbar) p), lambda_M = sqrt(hbar^2 beta / M).
/// Coincides with the basis ladder operator only when lambda_M = 2 sqrt(hbar / (M omega_basis)).
OperatorMatrix build_annihilator(const HilbertConfig& cfg, double beta);

/// Thermal wavelength sqrt(hbar^2 beta / M) of the test particle.
double thermal_wavelength(const HilbertConfig& cfg, double beta);

/// Hermitian, unit-trace, positive semidefinite operator. Checked once at
/// construction; evolved states are carried as plain OperatorMatrix.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kPositivityTol = -1e-10;

  explicit DensityMatrix(OperatorMatrix rho);

  static DensityMatrix from_pure(const StateVector& psi);

  const OperatorMatrix& matrix() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }

 private:
  OperatorMatrix rho_;
};

/// Tr(rho A).
Complex expectation(const OperatorMatrix& rho, const OperatorMatrix& a);
Complex expectation(const DensityMatrix& rho, const OperatorMatrix& a);

/// Smallest eigenvalue of (rho + rho^dagger)/2.
double min_eigenvalue(const OperatorMatrix& rho);
double min_eigenvalue(const DensityMatrix& rho);

/// max_ij |A_ij - conj(A_ji)|
double hermiticity_deviation(const OperatorMatrix& a);

/// Throws std::invalid_argument unless A is square of the expected size.
void require_dim(const OperatorMatrix& a, int dim, const std::string& what);

}  // namespace qbm
