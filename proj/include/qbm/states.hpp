#pragma once

#include "qbm/operator_core.hpp"

namespace qbm {

/// |n> in the number basis.
StateVector basis_state(const HilbertConfig& cfg, int n);

/// Coherent state of the basis oscillator, truncated and renormalized.
StateVector coherent_state(const HilbertConfig& cfg, Complex alpha);

/// Gaussian pure state D(alpha) S(r) |0> with <x> = mean_x, <p> = mean_p,
/// var_x = l^2 e^{-2r} / 2 and var_p = (hbar/l)^2 e^{2r} / 2, l the basis
/// length scale. Built in an enlarged space and truncated to cfg.dim.
StateVector gaussian_state(const HilbertConfig& cfg, double mean_x, double mean_p, double squeeze_r);

/// Mixed Gaussian state D(alpha) S(r) rho_th S(r)^dagger D(alpha)^dagger, with
/// rho_th the basis-oscillator thermal state of mean occupation nbar.
/// Variances are those of gaussian_state scaled by (2 nbar + 1).
DensityMatrix gaussian_mixed_state(const HilbertConfig& cfg, double mean_x, double mean_p, double squeeze_r,
                                   double nbar);

/// exp(-beta H) / Z for a Hermitian H.
DensityMatrix gibbs_state(const OperatorMatrix& h, double beta);

DensityMatrix maximally_mixed(const HilbertConfig& cfg);

}  // namespace qbm
