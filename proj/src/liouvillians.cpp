#include "qbm/liouvillians.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "qbm/quadrature.hpp"

namespace qbm {

namespace {

constexpr Complex kI(0.0, 1.0);

// Largest |eigenvalue| of -(beta/4M) q p allowed before exp() of the
// truncated momentum becomes numerically meaningless.
constexpr double kMaxBoostExponent = 5.0;

void require_kind(const LiouvillianSpec& spec, GeneratorKind kind, const char* name) {
  if (spec.kind != kind) throw std::invalid_argument(std::string(name) + ": wrong generator kind");
}

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("generator.beta must be > 0");
}

// Shared assembly for caldeira_leggett, bilinear and minimal_qbm; a single
// code path keeps those generators bitwise identical when their coefficients
// coincide.
Superoperator assemble_bilinear(const HilbertConfig& cfg, const HamiltonianKind& hk,
                                const BilinearCoefficients& c) {
  c.validate();
  const OperatorMatrix x = build_position(cfg);
  const OperatorMatrix p = build_momentum(cfg);
  const double hbar = cfg.hbar;
  const double z = c.fugacity_z;

  Superoperator l(cfg);
  l.add_hamiltonian(build_hamiltonian(cfg, hk));
  if (c.mu != 0.0) {
    // -(i/hbar) mu [rho, {x,p}] = (i/hbar) mu [{x,p}, rho]
    const OperatorMatrix k = x * p + p * x;
    l.add_hamiltonian(k, -c.mu);
  }
  if (c.gamma != 0.0) l.add_commutator_anticommutator(x, p, -kI * z * c.gamma / hbar);
  if (c.D_xx != 0.0) l.add_double_commutator(p, p, -z * c.D_xx / (hbar * hbar));
  if (c.D_pp != 0.0) l.add_double_commutator(x, x, -z * c.D_pp / (hbar * hbar));
  if (c.D_xp != 0.0) {
    l.add_double_commutator(p, x, z * c.D_xp / (hbar * hbar));
    l.add_double_commutator(x, p, z * c.D_xp / (hbar * hbar));
  }
  return l;
}

double spectral_radius_hermitian(const OperatorMatrix& a) {
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

Superoperator::Superoperator(const HilbertConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  left_ = OperatorMatrix::Zero(cfg_.dim, cfg_.dim);
  right_ = OperatorMatrix::Zero(cfg_.dim, cfg_.dim);
}

void Superoperator::add_left(const OperatorMatrix& k) {
  require_dim(k, cfg_.dim, "Superoperator::add_left");
  left_ += k;
}

void Superoperator::add_right(const OperatorMatrix& k) {
  require_dim(k, cfg_.dim, "Superoperator::add_right");
  right_ += k;
}

void Superoperator::add_sandwich(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_dim(a, cfg_.dim, "Superoperator::add_sandwich");
  require_dim(b, cfg_.dim, "Superoperator::add_sandwich");
  // A1 rho B + A2 rho B = (A1 + A2) rho B
  for (auto& s : sandwiches_) {
    if (s.right == b) {
      s.left += a;
      return;
    }
  }
  sandwiches_.push_back({a, b});
}

void Superoperator::add_hamiltonian(const OperatorMatrix& h, double c) {
  const Complex f = -kI * c / cfg_.hbar;
  add_left(f * h);
  add_right(-f * h);
}

void Superoperator::add_double_commutator(const OperatorMatrix& a, const OperatorMatrix& b, Complex c) {
  // [A,[B,rho]] = AB rho - A rho B - B rho A + rho BA
  add_left(c * (a * b));
  add_right(c * (b * a));
  add_sandwich(-c * a, b);
  add_sandwich(-c * b, a);
}

void Superoperator::add_commutator_anticommutator(const OperatorMatrix& a, const OperatorMatrix& b,
                                                  Complex c) {
  // [A,{B,rho}] = AB rho + A rho B - B rho A - rho BA
  add_left(c * (a * b));
  add_right(-c * (b * a));
  add_sandwich(c * a, b);
  add_sandwich(-c * b, a);
}

void Superoperator::add_lindblad(const OperatorMatrix& jump, double c) {
  const OperatorMatrix jd = jump.adjoint();
  const OperatorMatrix n = jd * jump;
  add_sandwich(c * jump, jd);
  add_left(-0.5 * c * n);
  add_right(-0.5 * c * n);
}

OperatorMatrix Superoperator::apply(const OperatorMatrix& rho) const {
  OperatorMatrix out, scratch;
  apply_into(rho, out, scratch);
  return out;
}

void Superoperator::apply_into(const OperatorMatrix& rho, OperatorMatrix& out, OperatorMatrix& scratch) const {
  require_dim(rho, cfg_.dim, "Superoperator::apply");
  out.noalias() = left_ * rho;
  out.noalias() += rho * right_;
  for (const auto& s : sandwiches_) {
    scratch.noalias() = rho * s.right;
    out.noalias() += s.left * scratch;
  }
}

Eigen::MatrixXcd superoperator_matrix(const Superoperator& l) {
  const int n = l.dim();
  if (static_cast<long>(n) * n > 10000)
    throw std::invalid_argument("superoperator_matrix: dim^2 exceeds 10^4");
  const OperatorMatrix id = OperatorMatrix::Identity(n, n);
  // vec(A rho B) = (B^T kron A) vec(rho) for column stacking.
  Eigen::MatrixXcd s = Eigen::kroneckerProduct(id, l.left());
  s += Eigen::kroneckerProduct(l.right().transpose(), id);
  for (const auto& w : l.sandwiches()) s += Eigen::kroneckerProduct(w.right.transpose(), w.left);
  return s;
}

void BilinearCoefficients::validate() const {
  for (double v : {gamma, mu, D_pp, D_xx, D_xp, fugacity_z})
    if (!std::isfinite(v)) throw std::invalid_argument("bilinear coefficients must be finite");
  if (D_pp < 0.0) throw std::invalid_argument("D_pp must be >= 0");
  if (D_xx < 0.0) throw std::invalid_argument("D_xx must be >= 0");
  if (fugacity_z < 0.0) throw std::invalid_argument("fugacity_z must be >= 0");
}

CollisionParameters CollisionParameters::with_gauss_legendre(double gas_mass, double beta,
                                                             double fugacity_z, const TMatrixModel& tmatrix,
                                                             double q_max, int n_nodes) {
  CollisionParameters c;
  c.gas_mass = gas_mass;
  c.beta = beta;
  c.fugacity_z = fugacity_z;
  c.tmatrix = tmatrix;
  c.q_max = q_max;
  if (!(q_max > 0.0)) throw std::invalid_argument("collision.q_max must be > 0");
  const QuadratureRule rule = gauss_legendre(n_nodes, 0.0, q_max);
  c.q_nodes = rule.nodes;
  c.q_weights = rule.weights;
  return c;
}

void CollisionParameters::validate() const {
  if (!(gas_mass > 0.0)) throw std::invalid_argument("collision: gas mass must be > 0");
  require_beta(beta);
  if (!(fugacity_z > 0.0)) throw std::invalid_argument("collision: fugacity must be > 0");
  if (!(q_max > 0.0)) throw std::invalid_argument("collision.q_max must be > 0");
  tmatrix.validate();
  if (q_nodes.empty()) throw std::invalid_argument("collision: empty q grid");
  if (q_nodes.size() != q_weights.size()) throw std::invalid_argument("collision: nodes/weights mismatch");
  for (std::size_t k = 0; k < q_nodes.size(); ++k) {
    if (!(q_nodes[k] > 0.0 && q_nodes[k] <= q_max))
      throw std::invalid_argument("collision: q nodes must lie in (0, q_max]");
    if (!(q_weights[k] > 0.0)) throw std::invalid_argument("collision: weights must be positive");
  }
}

GasThermodynamics CollisionParameters::gas() const {
  return {beta, gas_mass, fugacity_z, Statistics::maxwell_boltzmann};
}

Superoperator build_unitary(const HilbertConfig& cfg, const OperatorMatrix& h) {
  Superoperator l(cfg);
  l.add_hamiltonian(h);
  return l;
}

Superoperator build_caldeira_leggett(const HilbertConfig& cfg, const LiouvillianSpec& spec) {
  require_kind(spec, GeneratorKind::caldeira_leggett, "build_caldeira_leggett");
  require_beta(spec.beta);
  if (spec.coeffs.gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
  BilinearCoefficients c;
  c.gamma = spec.coeffs.gamma;
  c.D_pp = 2.0 * cfg.mass * spec.coeffs.gamma / spec.beta;
  return assemble_bilinear(cfg, spec.hamiltonian, c);
}

Superoperator build_bilinear_lindblad(const HilbertConfig& cfg, const LiouvillianSpec& spec) {
  require_kind(spec, GeneratorKind::bilinear, "build_bilinear_lindblad");
  return assemble_bilinear(cfg, spec.hamiltonian, spec.coeffs);
}

CoefficientSet minimal_qbm_coefficients(const HilbertConfig& cfg, const LiouvillianSpec& spec) {
  require_beta(spec.beta);
  if (spec.coeffs.D_pp < 0.0) throw std::invalid_argument("D_pp must be >= 0");
  return coefficients_from_dpp(spec.coeffs.D_pp, spec.beta, cfg.mass, cfg.hbar);
}

Superoperator build_minimal_qbm(const HilbertConfig& cfg, const LiouvillianSpec& spec) {
  require_kind(spec, GeneratorKind::minimal_qbm, "build_minimal_qbm");
  const CoefficientSet cs = minimal_qbm_coefficients(cfg, spec);
  BilinearCoefficients c;
  c.gamma = cs.gamma;
  c.D_pp = cs.D_pp;
  c.D_xx = cs.D_xx;
  c.fugacity_z = spec.coeffs.fugacity_z;
  return assemble_bilinear(cfg, spec.hamiltonian, c);
}

Superoperator build_minimal_qbm_single_generator(const HilbertConfig& cfg, const LiouvillianSpec& spec) {
  require_kind(spec, GeneratorKind::minimal_qbm, "build_minimal_qbm_single_generator");
  const CoefficientSet cs = minimal_qbm_coefficients(cfg, spec);
  const double z = spec.coeffs.fugacity_z;
  if (!(z >= 0.0)) throw std::invalid_argument("fugacity_z must be >= 0");
  const OperatorMatrix x = build_position(cfg);
  const OperatorMatrix p = build_momentum(cfg);
  const double lambda = thermal_wavelength(cfg, spec.beta);

  Superoperator l(cfg);
  l.add_hamiltonian(build_hamiltonian(cfg, spec.hamiltonian));
  l.add_hamiltonian(x * p + p * x, z * cs.single_generator_shift);
  l.add_lindblad(build_annihilator(cfg, spec.beta), z * cs.D_pp * lambda * lambda / (cfg.hbar * cfg.hbar));
  return l;
}

Superoperator build_boltzmann_collision(const HilbertConfig& cfg, const LiouvillianSpec& spec) {
  require_kind(spec, GeneratorKind::boltzmann_collision, "build_boltzmann_collision");
  if (!spec.collision) throw std::invalid_argument("build_boltzmann_collision: missing collision parameters");
  const CollisionParameters& col = *spec.collision;
  col.validate();

  const OperatorMatrix x = build_position(cfg);
  const OperatorMatrix p = build_momentum(cfg);
  const double hbar = cfg.hbar;
  const double boost = col.beta / (4.0 * cfg.mass);
  const double max_exponent = boost * col.q_max * spectral_radius_hermitian(p);
  if (max_exponent > kMaxBoostExponent)
    throw std::invalid_argument("build_boltzmann_collision: q_max * beta * |p| / 4M = " +
                                std::to_string(max_exponent) + " exceeds " +
                                std::to_string(kMaxBoostExponent) +
                                "; lower q_max or dim, or raise omega_basis");

  constexpr double pi = std::numbers::pi;
  const double m = col.gas_mass;
  const double prefactor = 4.0 * pi * pi * m * m / (3.0 * col.beta * hbar);

  Superoperator l(cfg);
  l.add_hamiltonian(build_hamiltonian(cfg, spec.hamiltonian));
  for (std::size_t k = 0; k < col.q_nodes.size(); ++k) {
    const double q = col.q_nodes[k];
    const double t2 = col.tmatrix.squared(q);
    if (t2 == 0.0) continue;
    const double radial = 2.0 * pi * q * q * col.q_weights[k];
    const double rate = col.fugacity_z * prefactor * radial * t2 / q * std::exp(-col.beta * q * q / (8.0 * m));
    for (double sign : {1.0, -1.0}) {
      const double qs = sign * q;
      const OperatorMatrix shift_gen = (kI * qs / hbar) * x;
      const OperatorMatrix boost_gen = (-boost * qs) * p;
      const OperatorMatrix u = shift_gen.exp();
      OperatorMatrix g = boost_gen.exp();
      g = (0.5 * (g + g.adjoint())).eval();
      if (!u.allFinite() || !g.allFinite())
        throw NumericalError("build_boltzmann_collision: non-finite matrix exponential");
      const OperatorMatrix ug = u * g;
      l.add_sandwich(rate * ug, ug.adjoint());
      const OperatorMatrix g2 = g * g;
      l.add_left(-0.5 * rate * g2);
      l.add_right(-0.5 * rate * g2);
    }
  }
  return l;
}

Superoperator build_generator(const HilbertConfig& cfg, const LiouvillianSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::unitary:
      return build_unitary(cfg, build_hamiltonian(cfg, spec.hamiltonian));
    case GeneratorKind::caldeira_leggett:
      return build_caldeira_leggett(cfg, spec);
    case GeneratorKind::bilinear:
      return build_bilinear_lindblad(cfg, spec);
    case GeneratorKind::minimal_qbm:
      return build_minimal_qbm(cfg, spec);
    case GeneratorKind::boltzmann_collision:
      return build_boltzmann_collision(cfg, spec);
  }
  throw std::logic_error("unknown generator kind");
}

}  // namespace qbm
