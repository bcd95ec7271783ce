#pragma once

#include <optional>
#include <span>

#include "qbm/structure_factor.hpp"

namespace qbm {

/// Squared modulus of the Fourier-transformed two-body T matrix, |t(q)|^2.
struct TMatrixModel {
  enum class Kind { constant, gaussian };
  Kind kind = Kind::constant;
  double t0 = 1.0;
  double sigma_q = 1.0;  // gaussian: t(q) = t0 exp(-q^2 / (2 sigma_q^2))

  static TMatrixModel constant(double t0) { return {Kind::constant, t0, 1.0}; }
  static TMatrixModel gaussian(double t0, double sigma_q) { return {Kind::gaussian, t0, sigma_q}; }

  void validate() const;
  double squared(double q) const;
};

enum class Provenance { user, microscopic };

/// Coefficients of the bilinear master equation. For microscopic provenance
/// D_xx = (beta hbar / 4M)^2 D_pp and gamma = (beta / 2M) D_pp by construction.
struct CoefficientSet {
  double D_pp = 0.0;
  double D_xx = 0.0;
  double D_xp = 0.0;
  double gamma = 0.0;
  double mu = 0.0;
  /// Coefficient s of the Hamiltonian correction -(i/hbar) z s [{x,p}, rho]
  /// that accompanies the single-generator (a rho a^dagger) form:
  /// s = D_pp lambda_M^2 / (4 hbar^2). Zero for user-supplied sets.
  double single_generator_shift = 0.0;
  Provenance provenance = Provenance::user;
};

/// Radial integrand weight of D_pp: (2/3)(pi^2 m^2 / beta hbar) 4 pi q^3 |t(q)|^2 exp(-beta q^2 / 8m).
double dpp_radial_density(double q, const TMatrixModel& t, const GasThermodynamics& gas, double hbar);

/// Microscopic coefficient set from adaptive radial quadrature on
/// (0, 12 sqrt(8m/beta)]. mass_M is the test-particle mass.
CoefficientSet compute_dpp(const TMatrixModel& t, const GasThermodynamics& gas, double mass_M,
                           double hbar = 1.0);

/// Same relations, with D_pp from a fixed radial rule (nodes/weights on q > 0).
CoefficientSet compute_dpp_on_rule(const TMatrixModel& t, const GasThermodynamics& gas, double mass_M,
                                   double hbar, std::span<const double> nodes,
                                   std::span<const double> weights);

/// Coefficient set with D_xx, gamma derived from D_pp.
CoefficientSet coefficients_from_dpp(double D_pp, double beta, double mass_M, double hbar);

struct CpResult {
  bool satisfied = false;
  /// D_xx D_pp - D_xp^2 - (gamma hbar / 2)^2
  double margin = 0.0;
};

/// Complete-positivity test: D_pp > 0, D_xx > 0 and
/// D_xx D_pp - D_xp^2 >= (gamma hbar/2)^2, the last up to a relative
/// rounding allowance rel_tol (gamma hbar/2)^2.
CpResult cp_check(const CoefficientSet& c, double hbar, double rel_tol = 1e-12);

/// chi = D_xx M / (beta hbar^2 gamma); 1/8 is the smallest value compatible
/// with complete positivity when D_xp = 0 and D_pp = 2 M gamma / beta.
double chi_of(const CoefficientSet& c, double beta, double mass_M, double hbar);

/// gamma_MB / gamma_{B,F}: 1 - z (Bose), 1 + z (Fermi), 1 (MB).
double friction_ratio(const GasThermodynamics& gas);

}  // namespace qbm
