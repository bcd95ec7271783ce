#pragma once

#include <functional>
#include <vector>

namespace qbm {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on [lo, hi]. Bisects the
/// interval with the largest error estimate until
/// error <= max(abs_tol, rel_tol |value|). Throws NumericalError on
/// non-finite integrand values or when max_intervals is exhausted.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double rel_tol = 1e-12, double abs_tol = 0.0,
                                    int max_intervals = 2000);

/// n-point Gauss-Legendre rule mapped to [lo, hi] (Golub-Welsch).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int n, double lo, double hi);

}  // namespace qbm
