#include "qbm/microcoeffs.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qbm/operator_core.hpp"
#include "qbm/quadrature.hpp"

namespace qbm {

void TMatrixModel::validate() const {
  if (!std::isfinite(t0)) throw std::invalid_argument("tmatrix.t0 must be finite");
  if (kind == Kind::gaussian && !(sigma_q > 0.0))
    throw std::invalid_argument("tmatrix.sigma_q must be > 0");
}

double TMatrixModel::squared(double q) const {
  switch (kind) {
    case Kind::constant:
      return t0 * t0;
    case Kind::gaussian:
      return t0 * t0 * std::exp(-q * q / (sigma_q * sigma_q));
  }
  throw std::logic_error("unknown T-matrix model");
}

double dpp_radial_density(double q, const TMatrixModel& t, const GasThermodynamics& gas, double hbar) {
  constexpr double pi = std::numbers::pi;
  const double m = gas.gas_mass;
  const double prefactor = (2.0 / 3.0) * pi * pi * m * m / (gas.beta * hbar) * 4.0 * pi;
  const double t2 = t.squared(q);
  if (t2 < 0.0 || !std::isfinite(t2)) throw NumericalError("negative or non-finite |t(q)|^2");
  const double damping = std::exp(-gas.beta * q * q / (8.0 * m));
  if (damping == 0.0 || t2 == 0.0) return 0.0;
  return prefactor * q * q * q * t2 * damping;
}

CoefficientSet coefficients_from_dpp(double D_pp, double beta, double mass_M, double hbar) {
  if (!(D_pp >= 0.0) || !std::isfinite(D_pp)) throw std::invalid_argument("D_pp must be >= 0");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  if (!(mass_M > 0.0)) throw std::invalid_argument("mass must be > 0");
  CoefficientSet c;
  const double k = beta * hbar / (4.0 * mass_M);
  c.D_pp = D_pp;
  c.D_xx = k * k * D_pp;
  c.gamma = beta / (2.0 * mass_M) * D_pp;
  c.D_xp = 0.0;
  c.mu = 0.0;
  const double lambda2 = hbar * hbar * beta / mass_M;
  c.single_generator_shift = D_pp * lambda2 / (4.0 * hbar * hbar);
  c.provenance = Provenance::microscopic;
  return c;
}

CoefficientSet compute_dpp(const TMatrixModel& t, const GasThermodynamics& gas, double mass_M, double hbar) {
  t.validate();
  gas.validate();
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be > 0");
  if (t.t0 == 0.0) return coefficients_from_dpp(0.0, gas.beta, mass_M, hbar);
  const double cutoff = 12.0 * std::sqrt(8.0 * gas.gas_mass / gas.beta);
  const auto result = integrate_adaptive(
      [&](double q) { return dpp_radial_density(q, t, gas, hbar); }, 0.0, cutoff, 1e-12);
  return coefficients_from_dpp(result.value, gas.beta, mass_M, hbar);
}

CoefficientSet compute_dpp_on_rule(const TMatrixModel& t, const GasThermodynamics& gas, double mass_M,
                                   double hbar, std::span<const double> nodes,
                                   std::span<const double> weights) {
  t.validate();
  gas.validate();
  if (nodes.size() != weights.size() || nodes.empty())
    throw std::invalid_argument("quadrature rule: nodes/weights mismatch or empty");
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * dpp_radial_density(nodes[k], t, gas, hbar);
  return coefficients_from_dpp(sum, gas.beta, mass_M, hbar);
}

CpResult cp_check(const CoefficientSet& c, double hbar, double rel_tol) {
  const double bound = 0.25 * c.gamma * hbar * c.gamma * hbar;
  CpResult r;
  r.margin = c.D_xx * c.D_pp - c.D_xp * c.D_xp - bound;
  r.satisfied = c.D_pp > 0.0 && c.D_xx > 0.0 && r.margin >= -rel_tol * bound;
  return r;
}

double chi_of(const CoefficientSet& c, double beta, double mass_M, double hbar) {
  if (c.gamma == 0.0) throw std::invalid_argument("chi undefined for gamma = 0");
  return c.D_xx * mass_M / (beta * hbar * hbar * c.gamma);
}

double friction_ratio(const GasThermodynamics& gas) {
  gas.validate();
  switch (gas.statistics) {
    case Statistics::maxwell_boltzmann:
      return 1.0;
    case Statistics::bose:
      return 1.0 - gas.fugacity;
    case Statistics::fermi:
      return 1.0 + gas.fugacity;
  }
  throw std::logic_error("unknown statistics");
}

}  // namespace qbm
