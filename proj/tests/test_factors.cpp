#include <doctest.h>

#include "helpers.hpp"
#include "hyperfact/factors.hpp"

using namespace hyperfact;
namespace oracle = hyperfact::testing;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

TEST_CASE("make_factor_pair accepts commuting and rejects non-commuting pairs") {
  const FactorPair ok = generate_commuting_contractions(7, 4);
  CHECK(ok.commutator_norm < 1e-10);
  CHECK((ok.product - ok.t1 * ok.t2).norm() == 0.0);

  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  CMatrix b = CMatrix::Zero(2, 2);
  b(0, 0) = 1.0;
  b(1, 1) = 0.5;
  CHECK_THROWS_AS((void)make_factor_pair(a, b), PreconditionError);
  CHECK_THROWS_AS((void)make_factor_pair(a, CMatrix::Zero(3, 3)), DimensionError);
}

TEST_CASE("order-one pair defect is the ordinary defect") {
  const FactorPair pair = generate_commuting_contractions(17, 4);
  CHECK((pair_defect(pair, 1, 1) -
         (CMatrix::Identity(4, 4) - pair.t1 * pair.t1.adjoint())).norm() < 1e-13);
  CHECK((pair_defect(pair, 1, 2) -
         (CMatrix::Identity(4, 4) - pair.t2 * pair.t2.adjoint())).norm() < 1e-13);
}

TEST_CASE("pair defect order recursion") {
  for (std::uint64_t seed : {3ULL, 5ULL, 9ULL}) {
    const FactorPair pair = generate_commuting_contractions(seed, 3);
    for (int n = 1; n <= 3; ++n) {
      for (int i : {1, 2}) {
        const CMatrix dn = pair_defect(pair, n, i);
        const CMatrix expected = dn - pair.product * dn * pair.product.adjoint();
        CHECK((pair_defect(pair, n + 1, i) - expected).norm() < 1e-10);
      }
    }
  }
}

TEST_CASE("the 2x2 counterexample family at the singular parameters") {
  const SzegoInstance inst = szego_counterexample(kInvSqrt2, kInvSqrt2, 0.5);

  // S commutes with T_r exactly and the product is T_r itself.
  CHECK(inst.pair.commutator_norm < 1e-14);
  CHECK((inst.pair.product - oracle::nilpotent_t(kInvSqrt2)).norm() < 1e-14);

  // Closed-form matrix against its frozen entries.
  CMatrix expected(2, 2);
  expected << 0.0, -1.0 / (2.0 * std::sqrt(2.0)), -1.0 / (2.0 * std::sqrt(2.0)), 0.5;
  CHECK((inst.defect2 - expected).norm() < 1e-12);

  // The hereditary-calculus route reproduces the closed form.
  CHECK((pair_defect(inst.pair, 2, 2) - inst.defect2).norm() < 1e-12);

  const auto [hi, lo] = oracle::eig2(inst.defect2(0, 0).real(), inst.defect2(0, 1),
                                     inst.defect2(1, 1).real());
  CHECK(lo == doctest::Approx(-0.1830127018922193).epsilon(1e-10));
  CHECK(hi == doctest::Approx(0.6830127018922193).epsilon(1e-10));

  const FmReport fm = check_fm(inst.pair, 2);
  CHECK_FALSE(fm.member);
  CHECK(fm.pair_defects_psd[1].min_eigenvalue ==
        doctest::Approx(-0.1830127018922193).epsilon(1e-9));
  // ... although the product is a 2-hypercontraction.
  CHECK(fm.product_hyper.hypercontraction_at(2));
  // Order 1 passes: both factors are contractions.
  CHECK(fm.order_certificates[0][0].is_psd);
  CHECK(fm.order_certificates[0][1].is_psd);
}

TEST_CASE("the family enters the class when b becomes small") {
  // The first-factor defect diag(1 - r^2 - r^2/a^2, 1) must also stay PSD,
  // so r has to sit well below a.
  const SzegoInstance inst = szego_counterexample(0.5, 0.8, 0.0);
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = (1.0 - 0.25) * (1.0 - 0.64);
  expected(1, 1) = 1.0 - 0.64;
  CHECK((inst.defect2 - expected).norm() < 1e-12);
  CHECK(psd_check(inst.defect2).is_psd);
  CHECK(check_fm(inst.pair, 2).member);
}

TEST_CASE("the closed form alone does not decide membership") {
  // At r = 1/sqrt(2), a = 0.8, b = 0 the second-factor defect is PSD while
  // the first-factor defect has the negative eigenvalue 1 - r^2 - r^2/a^2.
  const SzegoInstance inst = szego_counterexample(kInvSqrt2, 0.8, 0.0);
  CHECK(psd_check(inst.defect2).is_psd);
  const double margin = 1.0 - 0.5 - 0.5 / 0.64;
  const PsdCertificate first = psd_check(pair_defect(inst.pair, 2, 1));
  CHECK(first.min_eigenvalue == doctest::Approx(margin).epsilon(1e-10));
  CHECK_FALSE(check_fm(inst.pair, 2).member);
}

TEST_CASE("membership in the family matches both closed-form margins") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  int members = 0;
  int sampled = 0;
  for (int trial = 0; trial < 60 && sampled < 40; ++trial) {
    const double a = unit(rng);
    const double r = std::min(a, kInvSqrt2) * unit(rng);
    const double b = (1.0 - a * a) * unit(rng);
    // Closed-form oracles for both pair defects: the Eq-style matrix for
    // the second factor, diag(1 - r^2 - r^2/a^2, 1) for the first.
    const double margin1 = 1.0 - r * r - (r * r) / (a * a);
    const SzegoInstance inst = szego_counterexample(r, a, b);
    const auto [hi, lo] = oracle::eig2(inst.defect2(0, 0).real(), inst.defect2(0, 1),
                                       inst.defect2(1, 1).real());
    (void)hi;
    if (std::abs(margin1) < 1e-9 || std::abs(lo) < 1e-9) continue;  // boundary noise
    ++sampled;
    const bool member = check_fm(inst.pair, 2).member;
    CHECK(member == (margin1 > 0.0 && lo > 0.0));
    members += member ? 1 : 0;
  }
  // The box contains both verdicts; make sure the sweep saw both.
  CHECK(members > 0);
  CHECK(members < sampled);
}

TEST_CASE("counterexample preconditions are reported by name") {
  CHECK_THROWS_WITH_AS((void)szego_counterexample(0.72, 0.72, 0.2),
                       doctest::Contains("r^2 <= 1/2"), PreconditionError);
  CHECK_THROWS_WITH_AS((void)szego_counterexample(0.5, 0.9, 0.5),
                       doctest::Contains("b <= 1 - a^2"), PreconditionError);
  CHECK_THROWS_WITH_AS((void)szego_counterexample(0.6, 0.5, 0.1),
                       doctest::Contains("r <= a"), PreconditionError);
  CHECK_THROWS_AS((void)szego_counterexample(-0.1, 0.5, 0.1), PreconditionError);
}

TEST_CASE("any commuting contractive pair lies in the order-one class") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const FactorPair pair = generate_commuting_contractions(seed, 4);
    CHECK(check_fm(pair, 1).member);
  }
}

TEST_CASE("sufficiency decomposition is an exact identity for commuting pairs") {
  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL, 14ULL}) {
    const FactorPair pair = generate_commuting_contractions(seed, 5);
    for (int m = 1; m <= 3; ++m) {
      CHECK(sufficiency_residual(pair, m) < 1e-12);
    }
  }
}

TEST_CASE("order-one decomposition expands as I - TT*") {
  const FactorPair pair = generate_commuting_contractions(23, 4);
  const CMatrix lhs = hereditary_k_inverse(pair.product, 1);
  const CMatrix rhs =
      (CMatrix::Identity(4, 4) - pair.t1 * pair.t1.adjoint()) +
      pair.t1 * (CMatrix::Identity(4, 4) - pair.t2 * pair.t2.adjoint()) *
          pair.t1.adjoint();
  CHECK((lhs - rhs).norm() < 1e-13);
}

TEST_CASE("product_hyper_from_membership certifies every order") {
  const FactorPair pair = generate_fm_pair(42, 2, 2, 4);
  const HyperReport report = product_hyper_from_membership(pair, 2);
  CHECK(report.positive_at(1));
  CHECK(report.positive_at(2));
}

TEST_CASE("product_hyper_from_membership rejects non-members") {
  const SzegoInstance inst = szego_counterexample(kInvSqrt2, kInvSqrt2, 0.5);
  CHECK_THROWS_AS((void)product_hyper_from_membership(inst.pair, 2), PreconditionError);
}

TEST_CASE("generated members are deterministic, commuting, and verified") {
  const FactorPair a = generate_fm_pair(99, 2, 2, 4);
  const FactorPair b = generate_fm_pair(99, 2, 2, 4);
  CHECK((a.t1 - b.t1).norm() == 0.0);
  CHECK((a.t2 - b.t2).norm() == 0.0);
  CHECK(a.commutator_norm < 1e-9);
  CHECK(check_fm(a, 2).member);

  const FactorPair c = generate_fm_pair(100, 2, 2, 4);
  CHECK((a.t1 - c.t1).norm() > 1e-8);  // different seed, different pair
}

TEST_CASE("generated members exist for degenerate base dimension") {
  const FactorPair pair = generate_fm_pair(7, 1, 2, 3);
  CHECK(check_fm(pair, 2).member);
  CHECK(classify(pair.product, 2).is_pure);
}

TEST_CASE("membership is monotone in the order") {
  for (std::uint64_t seed : {31ULL, 32ULL}) {
    const FactorPair pair = generate_fm_pair(seed, 2, 3, 4);
    const FmReport at3 = check_fm(pair, 3);
    REQUIRE(at3.member);
    CHECK(at3.intermediate_chain_consistent);
    for (int n = 1; n <= 3; ++n) {
      CHECK(check_fm(pair, n).member);
    }
  }
}

TEST_CASE("sufficiency as a property of generated members") {
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 3);
    const FactorPair pair = generate_fm_pair(seed, dim, 2, 3);
    CHECK(sufficiency_residual(pair, 2) < 1e-10);
    CHECK(check_fm(pair, 2).product_hyper.hypercontraction_at(2));
  }
}
