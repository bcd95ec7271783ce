#pragma once

#include <random>

#include "qbm/operator_core.hpp"

namespace qbm::testing {

inline OperatorMatrix random_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  OperatorMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline OperatorMatrix random_hermitian(int dim, std::mt19937_64& rng) {
  const OperatorMatrix m = random_matrix(dim, rng);
  return 0.5 * (m + m.adjoint());
}

/// Full-rank random density matrix G G^dagger / Tr.
inline OperatorMatrix random_density(int dim, std::mt19937_64& rng) {
  const OperatorMatrix g = random_matrix(dim, rng);
  OperatorMatrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  return rho / rho.trace().real();
}

inline OperatorMatrix random_unitary(int dim, std::mt19937_64& rng) {
  Eigen::HouseholderQR<OperatorMatrix> qr(random_matrix(dim, rng));
  return qr.householderQ() * OperatorMatrix::Identity(dim, dim);
}

inline double max_abs(const OperatorMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qbm::testing
