#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "qbm/operator_core.hpp"
#include "qbm/states.hpp"
#include "support.hpp"

using namespace qbm;
using qbm::testing::max_abs;

namespace {
const Complex I(0.0, 1.0);
const double kS2 = std::sqrt(2.0);
}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW((HilbertConfig{2, 1, 1, 1}.validate()));
  CHECK_THROWS_AS((HilbertConfig{1, 1, 1, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((HilbertConfig{10, 0.0, 1, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((HilbertConfig{10, 1, -1, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((HilbertConfig{10, 1, 1, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((HilbertConfig{10, 1, 1, NAN}.validate()), std::invalid_argument);
}

TEST_CASE("position and momentum in dim 2") {
  const HilbertConfig cfg{2, 1, 1, 1};
  OperatorMatrix x_ref(2, 2), p_ref(2, 2);
  x_ref << 0, 1, 1, 0;
  x_ref /= kS2;
  p_ref << 0, -1, 1, 0;
  p_ref *= I / kS2;
  CHECK(max_abs(build_position(cfg) - x_ref) < 1e-15);
  CHECK(max_abs(build_momentum(cfg) - p_ref) < 1e-15);
}

TEST_CASE("x and p are exactly Hermitian, tridiagonal, p traceless") {
  for (auto cfg : {HilbertConfig{40, 1, 1, 1}, HilbertConfig{17, 0.7, 3.0, 0.2}}) {
    const OperatorMatrix x = build_position(cfg);
    const OperatorMatrix p = build_momentum(cfg);
    CHECK(x == x.adjoint());
    CHECK(p == p.adjoint());
    CHECK(p.trace() == Complex(0.0, 0.0));
    for (int i = 0; i < cfg.dim; ++i)
      for (int j = 0; j < cfg.dim; ++j)
        if (std::abs(i - j) > 1) {
          CHECK(x(i, j) == Complex(0.0));
          CHECK(p(i, j) == Complex(0.0));
        }
    CHECK(x.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK(p.real().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("canonical commutator on the leading block, corner artifact") {
  const HilbertConfig cfg{40, 1.3, 2.0, 0.7};
  const OperatorMatrix x = build_position(cfg);
  const OperatorMatrix p = build_momentum(cfg);
  const OperatorMatrix c = x * p - p * x;
  const int n = cfg.dim - 1;
  const OperatorMatrix lead = c.topLeftCorner(n, n) - I * cfg.hbar * OperatorMatrix::Identity(n, n);
  CHECK(lead.norm() < 1e-10);
  CHECK(std::abs(c(n, n) - (-I * cfg.hbar * double(n))) < 1e-10);
  CHECK(std::abs(c.trace()) < 1e-10);
}

TEST_CASE("length and momentum scales") {
  const HilbertConfig cfg{20, 2.0, 3.0, 0.5};
  CHECK(cfg.length_scale() == doctest::Approx(std::sqrt(2.0 / 1.5)).epsilon(1e-15));
  CHECK(cfg.momentum_scale() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  // <0|x^2|0> = l^2/2
  const OperatorMatrix x = build_position(cfg);
  CHECK((x * x)(0, 0).real() == doctest::Approx(0.5 * cfg.length_scale() * cfg.length_scale()));
}

TEST_CASE("harmonic spectrum on the leading block") {
  const HilbertConfig cfg{40, 1, 1, 1.7};
  const OperatorMatrix h = build_hamiltonian(cfg, HamiltonianKind::harmonic(1.7));
  CHECK(h == h.adjoint());
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(h.topLeftCorner(cfg.dim - 1, cfg.dim - 1));
  // The basis oscillator is diagonal up to the corner entry, so the leading
  // block carries the exact ladder.
  for (int n = 0; n < cfg.dim - 1; ++n) CHECK(std::abs(es.eigenvalues()(n) - 1.7 * (n + 0.5)) < 1e-8);
}

TEST_CASE("free Hamiltonian in dim 2") {
  const HilbertConfig cfg{2, 1, 1, 1};
  const OperatorMatrix h = build_hamiltonian(cfg, HamiltonianKind::free_particle());
  CHECK(h == h.adjoint());
  CHECK(max_abs(h - 0.25 * OperatorMatrix::Identity(2, 2)) < 1e-15);
  CHECK_THROWS_AS(build_hamiltonian(cfg, HamiltonianKind::harmonic(0.0)), std::invalid_argument);
}

TEST_CASE("thermal annihilator") {
  SUBCASE("matches the ladder when lambda = 2 l") {
    // lambda^2 = hbar^2 beta / M = 4 hbar / (M omega_b)  <=>  beta = 4 / (hbar omega_b)
    const HilbertConfig cfg{30, 1.0, 1.0, 0.8};
    const double beta = 4.0 / (cfg.hbar * cfg.omega_basis);
    CHECK(thermal_wavelength(cfg, beta) == doctest::Approx(2.0 * cfg.length_scale()));
    CHECK(max_abs(build_annihilator(cfg, beta) - build_ladder(cfg)) < 1e-14);
  }
  SUBCASE("bosonic commutator on the leading block") {
    for (double beta : {0.3, 1.0, 7.0}) {
      const HilbertConfig cfg{40, 1.0, 2.5, 1.3};
      const OperatorMatrix a = build_annihilator(cfg, beta);
      const OperatorMatrix c = a * a.adjoint() - a.adjoint() * a;
      const int n = cfg.dim - 1;
      CHECK((c.topLeftCorner(n, n) - OperatorMatrix::Identity(n, n)).norm() < 1e-10);
    }
  }
  SUBCASE("commutator is traceless in dim 2") {
    const OperatorMatrix a = build_annihilator(HilbertConfig{2, 1, 1, 1}, 2.0);
    CHECK(std::abs((a * a.adjoint() - a.adjoint() * a).trace()) < 1e-15);
  }
  CHECK_THROWS_AS(build_annihilator(HilbertConfig{4, 1, 1, 1}, 0.0), std::invalid_argument);
}

TEST_CASE("density matrix validation") {
  OperatorMatrix bad = OperatorMatrix::Identity(3, 3) / 3.0;
  CHECK_NOTHROW(static_cast<void>(DensityMatrix(bad)));
  bad(0, 1) = 1e-6;
  CHECK_THROWS_AS(static_cast<void>(DensityMatrix(bad)), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(OperatorMatrix::Identity(3, 3)), std::invalid_argument);
  OperatorMatrix neg = OperatorMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(static_cast<void>(DensityMatrix(neg)), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(OperatorMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("expectation values") {
  const HilbertConfig cfg{10, 1, 1, 1};
  const DensityMatrix ground = DensityMatrix::from_pure(basis_state(cfg, 0));
  const DensityMatrix first = DensityMatrix::from_pure(basis_state(cfg, 1));
  CHECK(std::abs(expectation(ground, build_number(cfg))) < 1e-15);
  CHECK(std::abs(expectation(maximally_mixed(cfg), build_identity(cfg)) - 1.0) < 1e-14);
  const OperatorMatrix x = build_position(cfg);
  CHECK(std::abs(expectation(first, x * x) - 1.5) < 1e-14);

  std::mt19937_64 rng(3);
  const OperatorMatrix rho = qbm::testing::random_density(10, rng);
  const OperatorMatrix a = qbm::testing::random_hermitian(10, rng);
  CHECK(std::abs(expectation(rho, a) - (rho * a).trace()) < 1e-12);
  CHECK(std::abs(expectation(rho, a).imag()) < 1e-12);
  CHECK(std::abs(expectation(rho, build_identity(cfg)) - rho.trace()) < 1e-15);
  CHECK_THROWS_AS(expectation(rho, build_identity(HilbertConfig{9, 1, 1, 1})), std::invalid_argument);
}

TEST_CASE("min eigenvalue") {
  const HilbertConfig cfg{8, 1, 1, 1};
  CHECK(std::abs(min_eigenvalue(DensityMatrix::from_pure(basis_state(cfg, 0)))) < 1e-12);
  CHECK(std::abs(min_eigenvalue(maximally_mixed(cfg)) - 1.0 / 8) < 1e-12);

  // 0.5|0><0| + 0.5|1><1| with off-diagonal 0.6: eigenvalues 0.5 +- 0.6.
  OperatorMatrix r = OperatorMatrix::Zero(2, 2);
  r(0, 0) = r(1, 1) = 0.5;
  r(0, 1) = r(1, 0) = 0.6;
  CHECK(min_eigenvalue(r) == doctest::Approx(-0.1).epsilon(1e-12));

  // Only the Hermitian part is diagonalized.
  OperatorMatrix skew = r;
  skew(0, 1) += I * 0.3;
  skew(1, 0) += I * 0.3;
  CHECK(min_eigenvalue(skew) == doctest::Approx(-0.1).epsilon(1e-12));

  std::mt19937_64 rng(11);
  for (int k = 0; k < 5; ++k) {
    const OperatorMatrix h = qbm::testing::random_hermitian(12, rng);
    const OperatorMatrix u = qbm::testing::random_unitary(12, rng);
    CHECK(std::abs(min_eigenvalue(h) - min_eigenvalue(OperatorMatrix(u * h * u.adjoint()))) < 1e-10);
  }

  OperatorMatrix nan = r;
  nan(0, 0) = NAN;
  CHECK_THROWS_AS(min_eigenvalue(nan), NumericalError);
}

TEST_CASE("Gaussian states carry the requested moments") {
  const HilbertConfig cfg{40, 1, 1, 1};
  const OperatorMatrix x = build_position(cfg);
  const OperatorMatrix p = build_momentum(cfg);
  const DensityMatrix g = DensityMatrix::from_pure(gaussian_state(cfg, 0.4, -0.3, 0.5));
  const double l = cfg.length_scale();
  CHECK(expectation(g, x).real() == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(expectation(g, p).real() == doctest::Approx(-0.3).epsilon(1e-10));
  const double vx = expectation(g, x * x).real() - 0.16;
  const double vp = expectation(g, p * p).real() - 0.09;
  CHECK(vx == doctest::Approx(0.5 * l * l * std::exp(-1.0)).epsilon(1e-9));
  CHECK(vp == doctest::Approx(0.5 * std::exp(1.0) / (l * l)).epsilon(1e-9));

  const DensityMatrix m = gaussian_mixed_state(cfg, 0.0, 0.0, 0.5, 0.1);
  CHECK(expectation(m, x * x).real() == doctest::Approx(1.2 * 0.5 * std::exp(-1.0)).epsilon(1e-9));
  CHECK(min_eigenvalue(m) > -1e-12);
  // Purity of a Gaussian thermal state: 1/(2 nbar + 1).
  CHECK((m.matrix() * m.matrix()).trace().real() == doctest::Approx(1.0 / 1.2).epsilon(1e-9));
}

TEST_CASE("Gibbs state") {
  const HilbertConfig cfg{30, 1, 1, 1};
  const DensityMatrix g = gibbs_state(build_hamiltonian(cfg, HamiltonianKind::harmonic(1.0)), 2.0);
  // <n> = 1/(e^{beta omega} - 1), truncation negligible here.
  CHECK(expectation(g, build_number(cfg)).real() == doctest::Approx(1.0 / std::expm1(2.0)).epsilon(1e-10));
  CHECK_THROWS_AS(gibbs_state(build_identity(cfg), 0.0), std::invalid_argument);
}
