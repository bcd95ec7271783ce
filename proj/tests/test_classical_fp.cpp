#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qbm/classical_fp.hpp"

using namespace qbm;

namespace {

FPGrid maxwellian(double eta, double D_v, int n, double half_width_sigmas = 8.0) {
  const double var = D_v / eta;
  const double vmax = half_width_sigmas * std::sqrt(var);
  return FPGrid::gaussian(-vmax, vmax, n, 0.0, var);
}

double total_mass(const FPGrid& g) { return g.mass(); }

}  // namespace

TEST_CASE("grid construction") {
  const FPGrid g = FPGrid::gaussian(-8.0, 8.0, 300, 0.3, 0.8);
  CHECK(std::abs(g.mass() - 1.0) < 1e-12);
  CHECK(g.mean() == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(g.variance() == doctest::Approx(0.8).epsilon(1e-10));
  CHECK_THROWS_AS(FPGrid::gaussian(1.0, 5.0, 10, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FPGrid::gaussian(-1.0, 1.0, 2, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FPGrid::gaussian(-1.0, 1.0, 10, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("Chang-Cooper weight") {
  CHECK(chang_cooper_delta(0.0) == 0.5);
  for (double w : {-30.0, -2.0, -1e-2, 1e-4, 5e-4, 2e-3, 0.7, 10.0, 800.0}) {
    const double d = chang_cooper_delta(w);
    CHECK(d > 0.0);
    CHECK(d < 1.0);
    if (std::abs(w) > 1e-3 && w < 700) CHECK(d == doctest::Approx(1.0 / w - 1.0 / std::expm1(w)).epsilon(1e-14));
  }
  // continuity across the series switch
  CHECK(chang_cooper_delta(0.999e-3) == doctest::Approx(chang_cooper_delta(1.001e-3)).epsilon(1e-6));
}

TEST_CASE("sampled Maxwellian is stationary") {
  const double eta = 1.3, D_v = 0.7;
  const FPGrid g = maxwellian(eta, D_v, 300);
  const double dt = fp_stable_dt(g, eta, D_v);
  const FPGrid next = fp_step(g, eta, D_v, dt);
  double worst = 0.0;
  for (int i = 0; i < g.n_cells; ++i) worst = std::max(worst, std::abs(next.p[i] - g.p[i]));
  CHECK(worst < 1e-10);
  const FPSolution sol = fp_solve(g, eta, D_v, 5.0, dt, 100);
  CHECK(std::abs(sol.moments.var_v.back() - D_v / eta) < 1e-10);
}

TEST_CASE("mass conservation and nonnegativity") {
  const double eta = 2.0, D_v = 0.5;
  FPGrid g = FPGrid::gaussian(-6.0, 6.0, 120, 2.0, 0.05);
  const double dt = fp_stable_dt(g, eta, D_v);
  for (int s = 0; s < 500; ++s) {
    const double before = total_mass(g);
    g = fp_step(g, eta, D_v, dt);
    CHECK(std::abs(total_mass(g) - before) < 1e-14);
    CHECK(*std::min_element(g.p.begin(), g.p.end()) >= -1e-15);
  }
  // pure drift also stays nonnegative through the upwind limit
  FPGrid d = FPGrid::gaussian(-6.0, 6.0, 120, 2.0, 0.05);
  const double dt0 = fp_stable_dt(d, eta, 0.0);
  for (int s = 0; s < 200; ++s) d = fp_step(d, eta, 0.0, dt0);
  CHECK(*std::min_element(d.p.begin(), d.p.end()) >= 0.0);
  CHECK(std::abs(d.mass() - 1.0) < 1e-12);
}

TEST_CASE("stability bound") {
  const FPGrid g = FPGrid::gaussian(-4.0, 4.0, 80, 0.0, 1.0);
  const double dv = g.dv();
  CHECK(fp_stable_dt(g, 1.0, 2.0) == doctest::Approx(0.4 * std::min(dv * dv / 4.0, dv / 4.0)));
  CHECK_THROWS_AS(fp_step(g, 1.0, 2.0, 1.01 * fp_stable_dt(g, 1.0, 2.0)), std::invalid_argument);
  CHECK_THROWS_AS(fp_step(g, -1.0, 2.0, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(fp_step(g, 1.0, -2.0, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(fp_solve(g, 1.0, 2.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(fp_solve(g, 1.0, 2.0, 0.0, 1e-4), std::invalid_argument);
}

TEST_CASE("pure diffusion spreads like the heat kernel") {
  const double D_v = 0.3, v0 = 0.1;
  const FPGrid g = FPGrid::gaussian(-10.0, 10.0, 400, 0.0, v0);
  const double dt = fp_stable_dt(g, 0.0, D_v);
  const FPSolution sol = fp_solve(g, 0.0, D_v, 4.0, dt, 50);
  for (std::size_t i = 0; i < sol.moments.times.size(); ++i) {
    const double expected = v0 + 2.0 * D_v * sol.moments.times[i];
    CHECK(std::abs(sol.moments.var_v[i] / expected - 1.0) < 0.005);
  }
}

TEST_CASE("moment relaxation") {
  const double eta = 0.8, D_v = 0.4;
  const FPGrid g = FPGrid::gaussian(-8.0, 8.0, 400, 1.0, 0.1);
  const double t_final = 2.0 / eta;
  const FPSolution sol = fp_solve(g, eta, D_v, t_final, 0.5 * fp_stable_dt(g, eta, D_v), 20);
  const auto& m = sol.moments;
  CHECK(m.times.back() == doctest::Approx(t_final).epsilon(1e-14));
  for (std::size_t i = 0; i < m.times.size(); ++i) {
    const double t = m.times[i];
    CHECK(std::abs(m.mean_v[i] / (m.mean_v.front() * std::exp(-eta * t)) - 1.0) < 0.01);
    const double var = D_v / eta + (m.var_v.front() - D_v / eta) * std::exp(-2.0 * eta * t);
    CHECK(std::abs(m.var_v[i] / var - 1.0) < 0.01);
    CHECK(std::abs(m.mass[i] - 1.0) < 1e-12);
  }
}

TEST_CASE("thermal diffusion constant gives equipartition") {
  const double M = 2.0, beta = 1.5, eta = 0.9;
  const double D_v = eta / (M * beta);
  const double sigma = std::sqrt(D_v / eta);
  const FPGrid g = FPGrid::gaussian(-6.5 * sigma, 6.5 * sigma, 400, 0.0, 0.3 * sigma * sigma);
  const FPSolution sol = fp_solve(g, eta, D_v, 12.0 / eta, fp_stable_dt(g, eta, D_v), 1000);
  CHECK(std::abs(sol.grid.variance() * M * beta - 1.0) < 0.005);
}

TEST_CASE("second-order convergence under grid doubling") {
  const double eta = 1.0, D_v = 1.0, t_final = 0.5, v0 = 0.2;
  const double exact = D_v / eta + (v0 - D_v / eta) * std::exp(-2.0 * eta * t_final);
  double prev = 0.0;
  for (int n : {50, 100, 200, 400}) {
    const FPGrid g = FPGrid::gaussian(-8.0, 8.0, n, 0.5, v0);
    const double dt = 0.2 * g.dv() * g.dv() / (2.0 * D_v);
    const double err = std::abs(fp_solve(g, eta, D_v, t_final, dt, 1 << 30).grid.variance() - exact);
    if (prev > 0.0) CHECK(prev / err >= 3.5);
    prev = err;
  }
}
