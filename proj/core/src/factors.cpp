#include "hyperfact/factors.hpp"

#include <cmath>

#include "hyperfact/randomgen.hpp"
#include "hyperfact/schur.hpp"

namespace hyperfact {

FactorPair make_factor_pair(const CMatrix& t1, const CMatrix& t2, double commute_tolerance) {
  ensure_square(t1, "make_factor_pair");
  ensure_square(t2, "make_factor_pair");
  ensure_finite(t1, "make_factor_pair");
  ensure_finite(t2, "make_factor_pair");
  if (t1.rows() != t2.rows()) {
    throw DimensionError("make_factor_pair: factors act on different spaces");
  }
  FactorPair pair;
  pair.t1 = t1;
  pair.t2 = t2;
  pair.product = t1 * t2;
  pair.commutator_norm = spectral_norm(t1 * t2 - t2 * t1);
  const double scale = std::max(1.0, spectral_norm(t1) * spectral_norm(t2));
  if (pair.commutator_norm > commute_tolerance * scale) {
    throw PreconditionError("make_factor_pair: factors do not commute (commutator norm " +
                            std::to_string(pair.commutator_norm) + ")");
  }
  return pair;
}

CMatrix pair_defect(const FactorPair& pair, int n, int i) {
  if (n < 1) throw PreconditionError("pair_defect: order must be >= 1");
  if (i != 1 && i != 2) throw PreconditionError("pair_defect: factor index must be 1 or 2");
  const CMatrix& ti = (i == 1) ? pair.t1 : pair.t2;
  if (ti.rows() != pair.product.rows()) {
    throw DimensionError("pair_defect: inconsistent dimensions");
  }
  const CMatrix k_inv = hereditary_k_inverse(pair.product, n - 1);
  CMatrix d = k_inv - ti * k_inv * ti.adjoint();
  return 0.5 * (d + d.adjoint());
}

FmReport check_fm(const FactorPair& pair, int m, double tolerance) {
  if (m < 1) throw PreconditionError("check_fm: order must be >= 1");
  FmReport report;
  report.m = m;
  for (int n = 1; n <= m; ++n) {
    report.orders_checked.push_back(n);
    report.order_certificates.push_back(
        {psd_check(pair_defect(pair, n, 1), tolerance),
         psd_check(pair_defect(pair, n, 2), tolerance)});
  }
  report.pair_defects_psd = report.order_certificates.back();

  const auto order_ok = [&](int n) {
    const auto& certs = report.order_certificates[static_cast<std::size_t>(n - 1)];
    return certs[0].is_psd && certs[1].is_psd;
  };
  report.member = order_ok(1) && order_ok(m);
  if (report.member) {
    for (int n = 2; n < m; ++n) {
      if (!order_ok(n)) report.intermediate_chain_consistent = false;
    }
  }
  report.product_hyper = classify(pair.product, m, tolerance);
  return report;
}

double sufficiency_residual(const FactorPair& pair, int m) {
  const CMatrix k_inv = hereditary_k_inverse(pair.product, m);
  const CMatrix d1 = pair_defect(pair, m, 1);
  const CMatrix d2 = pair_defect(pair, m, 2);
  const CMatrix decomposition = d1 + pair.t1 * d2 * pair.t1.adjoint();
  return spectral_norm(k_inv - decomposition) / std::max(1.0, spectral_norm(k_inv));
}

HyperReport product_hyper_from_membership(const FactorPair& pair, int m, double tolerance) {
  const FmReport fm = check_fm(pair, m, tolerance);
  if (!fm.member) {
    throw PreconditionError("product_hyper_from_membership: pair is not in the factor "
                            "class at order " + std::to_string(m));
  }
  const double residual = sufficiency_residual(pair, m);
  if (residual > 1e-10) {
    throw FactorizationError("product_hyper_from_membership: defect decomposition residual " +
                             std::to_string(residual) + " signals numerical breakdown");
  }
  const HyperReport report = classify(pair.product, m, tolerance);
  for (int n = 1; n <= m; ++n) {
    if (!report.positive_at(n)) {
      throw FactorizationError("product_hyper_from_membership: order " + std::to_string(n) +
                               " lost positivity despite membership");
    }
  }
  return report;
}

SzegoInstance szego_counterexample(double r, double a, double b) {
  constexpr double kSlack = 1e-12;
  if (!(r > 0.0)) throw PreconditionError("szego_counterexample: requires r > 0");
  if (r * r > 0.5 + kSlack) {
    throw PreconditionError("szego_counterexample: r^2 <= 1/2 fails, the product is "
                            "not a 2-hypercontraction");
  }
  if (!(a > 0.0)) throw PreconditionError("szego_counterexample: requires a > 0");
  if (b < 0.0) throw PreconditionError("szego_counterexample: requires b >= 0");
  if (b > 1.0 - a * a + kSlack) {
    throw PreconditionError("szego_counterexample: b <= 1 - a^2 fails, the second "
                            "factor is not a contraction");
  }
  if (r > a + kSlack) {
    throw PreconditionError("szego_counterexample: r <= a fails, the first factor "
                            "is not a contraction");
  }

  CMatrix t_r = CMatrix::Zero(2, 2);
  t_r(0, 1) = r;
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 0) = a;
  s(0, 1) = b;
  s(1, 1) = a;
  CMatrix s_inverse = CMatrix::Zero(2, 2);
  s_inverse(0, 0) = 1.0 / a;
  s_inverse(0, 1) = -b / (a * a);
  s_inverse(1, 1) = 1.0 / a;

  SzegoInstance instance;
  instance.pair = make_factor_pair(t_r * s_inverse, s);
  instance.defect2 = CMatrix::Zero(2, 2);
  instance.defect2(0, 0) = (1.0 - r * r) * (1.0 - a * a) - b * b;
  instance.defect2(0, 1) = -a * b;
  instance.defect2(1, 0) = -a * b;
  instance.defect2(1, 1) = 1.0 - a * a;
  return instance;
}

namespace {

// Smallest subspace containing the seeds and invariant under both maps.
CMatrix joint_invariant_subspace(const CMatrix& seeds, const CMatrix& map1,
                                 const CMatrix& map2) {
  CMatrix basis = orthonormalize_columns(seeds);
  const Index full = seeds.rows();
  for (Index round = 0; round <= full; ++round) {
    CMatrix grown(full, 3 * basis.cols());
    grown << basis, map1 * basis, map2 * basis;
    CMatrix next = orthonormalize_columns(grown);
    if (next.cols() == basis.cols()) return next;
    basis = next;
  }
  return basis;
}

}  // namespace

FactorPair generate_fm_pair(std::uint64_t seed, int base_dim, int m, int degree) {
  if (base_dim < 1) throw PreconditionError("generate_fm_pair: base_dim must be >= 1");
  if (m < 1) throw PreconditionError("generate_fm_pair: order must be >= 1");
  if (degree < 1) throw PreconditionError("generate_fm_pair: degree must be >= 1");

  const WeightTable table(m, degree + 1);
  constexpr int kMaxAttempts = 8;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt + 1)));
    const CMatrix u = random_unitary(rng, base_dim);
    std::uniform_int_distribution<Index> rank_dist(0, base_dim);
    const CMatrix p = random_projection(rng, base_dim, rank_dist(rng));
    const auto [phi, psi] = canonical_pencils(u, p);
    const CMatrix m_phi = model_operator(phi, m, degree, table).matrix;
    const CMatrix m_psi = model_operator(psi, m, degree, table).matrix;

    const Index full = m_phi.rows();
    const CMatrix seeds = random_gaussian(rng, full, 2);
    const CMatrix subspace =
        joint_invariant_subspace(seeds, m_phi.adjoint(), m_psi.adjoint());
    if (subspace.cols() == 0) continue;

    const CMatrix t1 = subspace.adjoint() * m_phi * subspace;
    const CMatrix t2 = subspace.adjoint() * m_psi * subspace;
    FactorPair pair = make_factor_pair(t1, t2);
    if (check_fm(pair, m).member) return pair;
  }
  throw Error("generate_fm_pair: no verified member after " +
              std::to_string(kMaxAttempts) + " attempts");
}

FactorPair generate_commuting_contractions(std::uint64_t seed, int dim) {
  if (dim < 1) throw PreconditionError("generate_commuting_contractions: dim must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const CMatrix base = random_gaussian(rng, dim, dim);
  const CMatrix upper = base.triangularView<Eigen::Upper>();
  const auto polynomial = [&](const CMatrix& x) {
    CMatrix out = coeff(rng) * CMatrix::Identity(dim, dim) + coeff(rng) * x +
                  coeff(rng) * x * x;
    const double norm = spectral_norm(out);
    if (norm > 0.0) out *= 0.95 / norm;
    return out;
  };
  const CMatrix t1 = polynomial(upper);
  const CMatrix t2 = polynomial(upper);
  return make_factor_pair(t1, t2);
}

}  // namespace hyperfact
