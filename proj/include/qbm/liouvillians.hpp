#pragma once

#include <optional>
#include <vector>

#include "qbm/microcoeffs.hpp"
#include "qbm/operator_core.hpp"

namespace qbm {

/// Linear map rho -> K_L rho + rho K_R + sum_j A_j rho B_j on the truncated
/// space. Generators are assembled once and are immutable afterwards, so a
/// built Superoperator may be applied concurrently to distinct states.
class Superoperator {
 public:
  struct Sandwich {
    OperatorMatrix left;
    OperatorMatrix right;
  };

  explicit Superoperator(const HilbertConfig& cfg);

  void add_left(const OperatorMatrix& k);
  void add_right(const OperatorMatrix& k);
  void add_sandwich(const OperatorMatrix& a, const OperatorMatrix& b);

  /// c (-i/hbar) [H, rho]
  void add_hamiltonian(const OperatorMatrix& h, double c = 1.0);
  /// c [A, [B, rho]]
  void add_double_commutator(const OperatorMatrix& a, const OperatorMatrix& b, Complex c);
  /// c [A, {B, rho}]
  void add_commutator_anticommutator(const OperatorMatrix& a, const OperatorMatrix& b, Complex c);
  /// c (J rho J^dagger - {J^dagger J, rho} / 2)
  void add_lindblad(const OperatorMatrix& jump, double c);

  OperatorMatrix apply(const OperatorMatrix& rho) const;
  /// Allocation-free variant for integrators; out and scratch are resized as needed.
  void apply_into(const OperatorMatrix& rho, OperatorMatrix& out, OperatorMatrix& scratch) const;

  const HilbertConfig& config() const { return cfg_; }
  int dim() const { return cfg_.dim; }
  const OperatorMatrix& left() const { return left_; }
  const OperatorMatrix& right() const { return right_; }
  const std::vector<Sandwich>& sandwiches() const { return sandwiches_; }

 private:
  HilbertConfig cfg_;
  OperatorMatrix left_;
  OperatorMatrix right_;
  std::vector<Sandwich> sandwiches_;
};

/// Column-stacking matrix S with vec(L[rho]) = S vec(rho). Requires dim^2 <= 10^4.
Eigen::MatrixXcd superoperator_matrix(const Superoperator& l);

struct BilinearCoefficients {
  double gamma = 0.0;
  double mu = 0.0;
  double D_pp = 0.0;
  double D_xx = 0.0;
  double D_xp = 0.0;
  /// Overall scale of the dissipator (never of the Hamiltonian part).
  double fugacity_z = 1.0;

  void validate() const;
};

/// One Cartesian component of the ideal-gas collision generator, sampled on
/// a radial rule over (0, q_max] and evaluated at both signs of q.
struct CollisionParameters {
  double gas_mass = 1.0;
  double beta = 1.0;
  double fugacity_z = 1.0;
  TMatrixModel tmatrix;
  std::vector<double> q_nodes;
  std::vector<double> q_weights;
  double q_max = 1.0;

  static CollisionParameters with_gauss_legendre(double gas_mass, double beta, double fugacity_z,
                                                 const TMatrixModel& tmatrix, double q_max, int n_nodes);
  void validate() const;
  GasThermodynamics gas() const;
};

enum class GeneratorKind { unitary, caldeira_leggett, bilinear, minimal_qbm, boltzmann_collision };

struct LiouvillianSpec {
  GeneratorKind kind = GeneratorKind::unitary;
  HamiltonianKind hamiltonian;
  BilinearCoefficients coeffs;
  /// Bath inverse temperature; used by caldeira_leggett and minimal_qbm.
  double beta = 1.0;
  std::optional<CollisionParameters> collision;
};

Superoperator build_unitary(const HilbertConfig& cfg, const OperatorMatrix& h);

/// -(i/hbar)[H,rho] - (i/hbar) gamma [x,{p,rho}] - (2 M gamma / beta hbar^2) [x,[x,rho]]
Superoperator build_caldeira_leggett(const HilbertConfig& cfg, const LiouvillianSpec& spec);

/// General bilinear generator:
///   -(i/hbar)[H,rho] - (i/hbar) mu [rho,{x,p}]
///   + z { -(i/hbar) gamma [x,{p,rho}] - D_xx/hbar^2 [p,[p,rho]] - D_pp/hbar^2 [x,[x,rho]]
///         + D_xp/hbar^2 ([p,[x,rho]] + [x,[p,rho]]) }
Superoperator build_bilinear_lindblad(const HilbertConfig& cfg, const LiouvillianSpec& spec);

/// Bilinear generator with D_xx = (beta hbar/4M)^2 D_pp, gamma = (beta/2M) D_pp,
/// mu = D_xp = 0; only coeffs.D_pp and coeffs.fugacity_z are read.
Superoperator build_minimal_qbm(const HilbertConfig& cfg, const LiouvillianSpec& spec);

/// The same generator assembled as a single Lindblad operator a per direction
/// plus the Hamiltonian correction -(i/hbar) z s [{x,p}, rho].
Superoperator build_minimal_qbm_single_generator(const HilbertConfig& cfg, const LiouvillianSpec& spec);

/// Ideal-gas collision generator:
///   -(i/hbar)[H,rho] + z C sum_{k,+-} w_k |t(q)|^2/q e^{-beta q^2/8m}
///       [U G rho G U^dagger - {G^2, rho}/2],
/// U = exp(i q x / hbar), G = exp(-beta q p / 4M), C = 4 pi^2 m^2 / (3 beta hbar)
/// and w_k = 2 pi q_k^2 (radial weight), so that the small-q expansion
/// reproduces compute_dpp_on_rule on the same nodes.
Superoperator build_boltzmann_collision(const HilbertConfig& cfg, const LiouvillianSpec& spec);

/// Coefficients that build_minimal_qbm uses, for reporting and cross-checks.
CoefficientSet minimal_qbm_coefficients(const HilbertConfig& cfg, const LiouvillianSpec& spec);

Superoperator build_generator(const HilbertConfig& cfg, const LiouvillianSpec& spec);

}  // namespace qbm
