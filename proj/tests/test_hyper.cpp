#include <doctest.h>

#include "helpers.hpp"
#include "hyperfact/hyper.hpp"

using namespace hyperfact;
namespace oracle = hyperfact::testing;

namespace {

CMatrix diag2(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// Hardy-space shift truncated to degrees 0..2.
CMatrix jordan_shift3() {
  CMatrix j = CMatrix::Zero(3, 3);
  j(1, 0) = 1.0;
  j(2, 1) = 1.0;
  return j;
}

}  // namespace

TEST_CASE("hereditary defect of the zero operator and of nilpotents") {
  CHECK((hereditary_k_inverse(CMatrix::Zero(3, 3), 2) - CMatrix::Identity(3, 3)).norm() <
        1e-15);

  for (double r : {0.3, 0.6, 1.0 / std::sqrt(2.0)}) {
    const CMatrix t = oracle::nilpotent_t(r);
    CHECK((hereditary_k_inverse(t, 1) - diag2(1.0 - r * r, 1.0)).norm() < 1e-15);
    CHECK((hereditary_k_inverse(t, 2) - diag2(1.0 - 2.0 * r * r, 1.0)).norm() < 1e-15);
  }
}

TEST_CASE("hereditary defect of the truncated Hardy shift") {
  const CMatrix j = jordan_shift3();
  // Direct multiplication oracle: I - J J*.
  const CMatrix expected = CMatrix::Identity(3, 3) - j * j.adjoint();
  CHECK((hereditary_k_inverse(j, 1) - expected).norm() < 1e-15);
  CHECK(psd_check(hereditary_k_inverse(j, 1)).is_psd);
}

TEST_CASE("hereditary recursion K_n = K_{n-1} - T K_{n-1} T*") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix t = random_contraction(rng, 4, 0.95);
    for (int n = 1; n <= 4; ++n) {
      const CMatrix prev = hereditary_k_inverse(t, n - 1);
      const CMatrix next = hereditary_k_inverse(t, n);
      CHECK((next - (prev - t * prev * t.adjoint())).norm() < 1e-12);
    }
  }
}

TEST_CASE("classify the boundary nilpotent at r = 1/sqrt(2)") {
  const HyperReport report = classify(oracle::nilpotent_t(1.0 / std::sqrt(2.0)), 2);
  CHECK(report.hypercontraction_at(2));
  CHECK(std::abs(report.certificates[1].min_eigenvalue) < 1e-12);  // boundary case
  CHECK(report.is_pure);
  CHECK(report.spectral_radius < 1e-12);
}

TEST_CASE("classify a nilpotent past the boundary") {
  const HyperReport report = classify(oracle::nilpotent_t(0.72), 2);
  CHECK(report.is_contraction);
  CHECK(report.positive_at(1));
  CHECK_FALSE(report.positive_at(2));
  CHECK(report.certificates[1].min_eigenvalue ==
        doctest::Approx(1.0 - 2.0 * 0.72 * 0.72).epsilon(1e-12));
}

TEST_CASE("classify a unitary: every order positive, not pure") {
  CMatrix u = CMatrix::Zero(2, 2);
  u(0, 0) = 1.0;
  u(1, 1) = Complex(0.0, 1.0);
  const HyperReport report = classify(u, 5);
  for (int n = 1; n <= 5; ++n) {
    CHECK(report.positive_at(n));
    CHECK(std::abs(report.certificates[n - 1].min_eigenvalue) < 1e-14);
  }
  CHECK_FALSE(report.is_pure);
}

TEST_CASE("classify the zero operator and a non-contraction") {
  const HyperReport zero = classify(CMatrix::Zero(2, 2), 4);
  for (int n = 1; n <= 4; ++n) CHECK(zero.positive_at(n));
  CHECK(zero.is_pure);

  const HyperReport big = classify(1.5 * CMatrix::Identity(2, 2), 2);
  CHECK_FALSE(big.is_contraction);
  CHECK_FALSE(big.positive_at(1));
}

TEST_CASE("purity falls back to power decay near the unit circle") {
  CHECK_FALSE(classify(diag2(1.0 - 1e-13, 0.5), 1).is_pure);
  CHECK(classify(diag2(0.99, 0.5), 1).is_pure);
}

TEST_CASE("defect operators and bases") {
  CMatrix u = CMatrix::Zero(2, 2);
  u(0, 1) = 1.0;
  u(1, 0) = 1.0;
  const Defect du = defect(u, 1);
  CHECK(du.d.norm() < 1e-12);
  CHECK(du.basis.cols() == 0);

  const Defect dr = defect(oracle::nilpotent_t(0.6), 1);
  CHECK((dr.d - diag2(0.8, 1.0)).norm() < 1e-12);
  CHECK(dr.basis.cols() == 2);

  const Defect dz = defect(CMatrix::Zero(3, 3), 2);
  CHECK((dz.d - CMatrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("defect propagates the positivity certificate") {
  try {
    (void)defect(oracle::nilpotent_t(0.9), 2);
    FAIL("expected NotPsdError");
  } catch (const NotPsdError& err) {
    CHECK(err.certificate().min_eigenvalue ==
          doctest::Approx(1.0 - 2.0 * 0.81).epsilon(1e-10));
  }
}

TEST_CASE("f_0 is the identity and order one telescopes to powers") {
  const WeightTable table(3, 16);
  std::mt19937_64 rng(81);
  const CMatrix t = random_contraction(rng, 3, 0.9);
  CHECK((f_r(t, 2, 0, table) - CMatrix::Identity(3, 3)).norm() == 0.0);
  CMatrix power = CMatrix::Identity(3, 3);
  for (int r = 0; r <= 6; ++r) {
    CHECK((f_r(t, 1, r, table) - power * power.adjoint()).norm() < 1e-12);
    power = t * power;
  }
}

TEST_CASE("f_r matches the direct-evaluation oracle") {
  const WeightTable table(3, 16);
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix t = random_contraction(rng, 3, 0.95);
    for (int n = 1; n <= 3; ++n) {
      for (int r : {0, 1, 3, 8}) {
        CHECK((f_r(t, n, r, table) - oracle::direct_f_r(t, n, r, table)).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("f_r order recurrence with the weight in front") {
  const WeightTable table(4, 16);
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 8; ++trial) {
    const CMatrix t = random_contraction(rng, 3, 0.98);
    for (int n = 2; n <= 4; ++n) {
      for (int r = 1; r <= 6; ++r) {
        const CMatrix lhs = f_r(t, n, r, table);
        CMatrix power = CMatrix::Identity(3, 3);
        for (int j = 0; j < r; ++j) power = t * power;
        const CMatrix rhs = f_r(t, n - 1, r, table) +
                            table.weight_d(n, r - 1) * power *
                                hereditary_k_inverse(t, n - 1) * power.adjoint();
        CHECK((lhs - rhs).norm() < 1e-10);
      }
    }
  }
}

TEST_CASE("f_r monotonicity on hypercontractions") {
  const WeightTable table(3, 24);
  std::mt19937_64 rng(111);
  for (int trial = 0; trial < 6; ++trial) {
    const int m = 1 + trial % 3;
    const CMatrix t = oracle::random_hypercontraction(rng, 4, m);
    REQUIRE(classify(t, m).hypercontraction_at(m));
    for (int r = 0; r <= 10; ++r) {
      const CMatrix down = f_r(t, m, r, table) - f_r(t, m, r + 1, table);
      CHECK(psd_check(down, 1e-9).is_psd);
      if (m >= 2) {
        const CMatrix across = f_r(t, m, r, table) - f_r(t, m - 1, r, table);
        CHECK(psd_check(across, 1e-9).is_psd);
      }
    }
  }
}

TEST_CASE("f_r needs a large enough weight table") {
  const WeightTable table(2, 4);
  const CMatrix t = oracle::nilpotent_t(0.5);
  CHECK_THROWS_AS((void)f_r(t, 2, 6, table), PreconditionError);
  CHECK_NOTHROW((void)f_r(t, 2, 5, table));
}

TEST_CASE("q_limit vanishes for pure operators") {
  std::mt19937_64 rng(121);
  const CMatrix t = random_contraction(rng, 4, 0.6);
  const QLimit limit = q_limit(t, 2);
  CHECK(limit.converged);
  CHECK(spectral_norm(limit.q_squared) < 1e-7);
  CHECK(limit.q_basis.cols() == 0);
  CHECK(limit.fixed_point_residual < 1e-7);
}

TEST_CASE("q_limit is the identity for unitaries") {
  CMatrix u = CMatrix::Zero(3, 3);
  u(0, 1) = 1.0;
  u(1, 2) = 1.0;
  u(2, 0) = 1.0;
  const QLimit limit = q_limit(u, 3);
  CHECK(limit.converged);
  CHECK((limit.q_squared - CMatrix::Identity(3, 3)).norm() < 1e-12);
  CHECK((limit.q - CMatrix::Identity(3, 3)).norm() < 1e-12);
  CHECK(limit.q_basis.cols() == 3);
}

TEST_CASE("q_limit finds the rank-one residual of diag(1, 1/2)") {
  const QLimit limit = q_limit(diag2(1.0, 0.5), 1);
  CHECK(limit.converged);
  CHECK((limit.q_squared - diag2(1.0, 0.0)).norm() < 1e-8);
  CHECK((limit.q - diag2(1.0, 0.0)).norm() < 1e-8);
  REQUIRE(limit.q_basis.cols() == 1);
  CHECK(std::abs(std::abs(limit.q_basis(0, 0)) - 1.0) < 1e-10);
  CHECK(limit.fixed_point_residual < 1e-10);
}

TEST_CASE("q_limit fixed point identity T Q^2 T* = Q^2") {
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix pure = oracle::random_hypercontraction(rng, 3, 2);
    CMatrix t = CMatrix::Zero(5, 5);
    t.topLeftCorner(3, 3) = pure;
    t(3, 3) = Complex(0.0, 1.0);
    t(4, 4) = std::polar(1.0, 0.4);
    const QLimit limit = q_limit(t, 2);
    CHECK(limit.converged);
    CHECK(limit.fixed_point_residual < 1e-7);
    CHECK(limit.q_basis.cols() == 2);
  }
}

TEST_CASE("q_limit rejects non-contractions and respects the cap") {
  CHECK_THROWS_AS((void)q_limit(1.2 * CMatrix::Identity(2, 2), 1), NotPsdError);
  const QLimit capped = q_limit(diag2(0.999999, 0.1), 1, 1e-10, 10);
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations == 10);
}
