#include "qbm/structure_factor.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qbm/quadrature.hpp"

namespace qbm {

namespace {

void require_positive_q(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("momentum transfer q must be > 0");
}

void require_mb(const GasThermodynamics& gas) {
  gas.validate();
  if (gas.statistics != Statistics::maxwell_boltzmann)
    throw std::invalid_argument("closed-form structure factor is only available for MB statistics");
}

// Energy-transfer window holding all but ~e^-200 of the Gaussian weight.
struct EnergyWindow {
  double lo, hi;
};

EnergyWindow window(double q, const GasThermodynamics& gas) {
  const double recoil = q * q / (2.0 * gas.gas_mass);
  const double width = q / std::sqrt(gas.beta * gas.gas_mass);
  return {recoil - 20.0 * width, recoil + 20.0 * width};
}

}  // namespace

void GasThermodynamics::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("gas.beta must be > 0");
  if (!(gas_mass > 0.0) || !std::isfinite(gas_mass))
    throw std::invalid_argument("gas.gas_mass must be > 0");
  if (!(fugacity > 0.0) || !std::isfinite(fugacity))
    throw std::invalid_argument("gas.fugacity_z must be > 0");
  if (statistics == Statistics::bose && fugacity >= 1.0)
    throw std::invalid_argument("gas.fugacity_z must be < 1 for Bose statistics");
}

double s_mb(double q, double energy, const GasThermodynamics& gas) {
  require_positive_q(q);
  require_mb(gas);
  const double a = gas.beta * gas.gas_mass / (2.0 * q * q);
  const double shift = energy - q * q / (2.0 * gas.gas_mass);
  return std::sqrt(a / std::numbers::pi) * std::exp(-a * shift * shift);
}

double sum_rule_zeroth(double q, const GasThermodynamics& gas) {
  require_positive_q(q);
  require_mb(gas);
  const auto w = window(q, gas);
  return integrate_adaptive([&](double e) { return s_mb(q, e, gas); }, w.lo, w.hi, 1e-13).value;
}

double sum_rule_f(double q, const GasThermodynamics& gas) {
  require_positive_q(q);
  require_mb(gas);
  const auto w = window(q, gas);
  return integrate_adaptive([&](double e) { return e * s_mb(q, e, gas); }, w.lo, w.hi, 1e-13,
                            1e-300)
      .value;
}

double statistics_prefactor(const GasThermodynamics& gas) {
  gas.validate();
  switch (gas.statistics) {
    case Statistics::maxwell_boltzmann:
      return gas.fugacity;
    case Statistics::bose:
      return gas.fugacity / (1.0 - gas.fugacity);
    case Statistics::fermi:
      return gas.fugacity / (1.0 + gas.fugacity);
  }
  throw std::logic_error("unknown statistics");
}

}  // namespace qbm
