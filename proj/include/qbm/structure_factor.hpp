#pragma once

namespace qbm {

enum class Statistics { maxwell_boltzmann, bose, fermi };

struct GasThermodynamics {
  double beta = 1.0;
  double gas_mass = 1.0;
  double fugacity = 1.0;
  Statistics statistics = Statistics::maxwell_boltzmann;

  void validate() const;
};

/// Dynamic structure factor of the ideal Maxwell-Boltzmann gas,
///   S(q, E) = sqrt(beta m / (2 pi q^2)) exp(-(beta m / (2 q^2)) (E - q^2/2m)^2),
/// with E the energy absorbed by the gas. Satisfies
/// S(q, -E) = exp(-beta E) S(q, E).
double s_mb(double q, double energy, const GasThermodynamics& gas);

/// Integral of S(q, E) over E (equals 1).
double sum_rule_zeroth(double q, const GasThermodynamics& gas);

/// Integral of E S(q, E) over E (equals the recoil energy q^2/2m).
double sum_rule_f(double q, const GasThermodynamics& gas);

/// Fugacity dependence of the Brownian-limit dissipator: z, z/(1-z), z/(1+z).
double statistics_prefactor(const GasThermodynamics& gas);

}  // namespace qbm
