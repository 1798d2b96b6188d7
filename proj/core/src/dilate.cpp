#include "hyperfact/dilate.hpp"

#include <cmath>

#include "hyperfact/schur.hpp"

namespace hyperfact {

namespace {

CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

CMatrix stack(const CMatrix& top, const CMatrix& bottom) {
  CMatrix out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

double sliced_intertwine(const CMatrix& model, const CMatrix& pi, const CMatrix& t,
                         Index fiber, Index degree, Index q_rows) {
  const CMatrix resid = model.adjoint() * pi - pi * t.adjoint();
  const Index bergman_keep = degree * fiber;
  CMatrix kept(bergman_keep + q_rows, resid.cols());
  kept.topRows(bergman_keep) = resid.topRows(bergman_keep);
  if (q_rows > 0) kept.bottomRows(q_rows) = resid.bottomRows(q_rows);
  return spectral_norm(kept);
}

// Restriction of the Douglas solution to ran-Q coordinates; checks that it
// acts unitarily there.
CMatrix residual_unitary(const CMatrix& x, const CMatrix& q_basis,
                         const std::string& claim) {
  const CMatrix w = q_basis.adjoint() * x * q_basis;
  const Index rq = w.rows();
  const double defect = (w.adjoint() * w - CMatrix::Identity(rq, rq)).norm();
  if (defect > 1e-8 * std::max<double>(1, rq)) {
    throw FactorizationError("claim failed: " + claim + " is not unitary on the "
                             "residual space (defect " + std::to_string(defect) + ")");
  }
  return w;
}

}  // namespace

TruncatedDilation canonical_pi(const CMatrix& t, int m, Index degree,
                               const WeightTable& table) {
  ensure_square(t, "canonical_pi");
  ensure_finite(t, "canonical_pi");
  if (m < 1) throw PreconditionError("canonical_pi: order must be >= 1");
  if (degree < 0) throw PreconditionError("canonical_pi: degree must be >= 0");
  if (!table.covers(m, static_cast<int>(degree))) {
    throw PreconditionError("canonical_pi: weight table too small for degree " +
                            std::to_string(degree));
  }
  const PsdCertificate order1 = psd_check(hereditary_k_inverse(t, 1));
  if (!order1.is_psd) {
    throw NotPsdError("canonical_pi: operator is not a contraction", order1);
  }

  TruncatedDilation out;
  out.order = m;
  out.degree = degree;

  // Throws with a certificate when the order-m defect is not PSD.
  const Defect df = defect(t, m);
  const CMatrix coords = df.basis.adjoint() * df.d;  // D in range coordinates
  const Index d = df.basis.cols();
  const Index h = t.rows();
  out.defect_dim = d;

  out.pi = CMatrix::Zero((degree + 1) * d, h);
  CMatrix adjoint_power = CMatrix::Identity(h, h);  // T*^k
  for (Index k = 0; k <= degree; ++k) {
    if (k > 0) adjoint_power = t.adjoint() * adjoint_power;
    out.pi.middleRows(k * d, d) =
        std::sqrt(table.weight_d(m, static_cast<int>(k))) * (coords * adjoint_power);
  }
  out.isometry_defect =
      spectral_norm(out.pi.adjoint() * out.pi - CMatrix::Identity(h, h));
  return out;
}

double intertwine_residual(const TruncatedDilation& dil, const CMatrix& t) {
  ensure_square(t, "intertwine_residual");
  const Index d = dil.defect_dim;
  const Index h = t.rows();
  if (dil.pi.cols() != h) {
    throw DimensionError("intertwine_residual: dilation and operator dimensions differ");
  }
  if (dil.degree == 0 || d == 0) return 0.0;
  const WeightTable table(dil.order, static_cast<int>(dil.degree) + 1);
  double worst = 0.0;
  for (Index k = 0; k < dil.degree; ++k) {
    const double ratio = table.shift_ratio(dil.order, static_cast<int>(k));
    const CMatrix row = ratio * dil.pi.middleRows((k + 1) * d, d) -
                        dil.pi.middleRows(k * d, d) * t.adjoint();
    worst = std::max(worst, spectral_norm(row));
  }
  return worst;
}

DilationPack douglas_dilation(const CMatrix& t, int m, Index degree, double) {
  const WeightTable table(m, static_cast<int>(degree) + 1);
  DilationPack pack;
  pack.bergman = canonical_pi(t, m, degree, table);

  QLimit limit = q_limit(t, m);
  if (!limit.converged) {
    throw ConvergenceError("douglas_dilation: limit iteration did not converge after " +
                           std::to_string(limit.iterations) + " steps (final step " +
                           std::to_string(limit.final_step_norm) + ")");
  }
  pack.q = limit.q;
  pack.q_basis = limit.q_basis;
  pack.residuals["fixed_point"] = limit.fixed_point_residual;

  const Index rq = pack.q_basis.cols();
  const CMatrix q_coords = pack.q_basis.adjoint() * pack.q;
  if (rq > 0) {
    const CMatrix x = douglas_solve(t * pack.q, pack.q);
    pack.w = residual_unitary(x, pack.q_basis, "the product residual rotation");
    pack.residuals["douglas"] =
        spectral_norm(x.adjoint() * pack.q - pack.q * t.adjoint());
    pack.residuals["w_unitary"] =
        (pack.w.adjoint() * pack.w - CMatrix::Identity(rq, rq)).norm();
  } else {
    pack.w = CMatrix(0, 0);
    pack.residuals["douglas"] = 0.0;
    pack.residuals["w_unitary"] = 0.0;
  }

  pack.pi = stack(pack.bergman.pi, q_coords);
  const Index h = t.rows();
  pack.residuals["isometry_defect"] =
      spectral_norm(pack.pi.adjoint() * pack.pi - CMatrix::Identity(h, h));

  const CMatrix model = direct_sum(bergman_shift(pack.bergman.defect_dim, m, degree, table).matrix,
                                   pack.w);
  pack.residuals["intertwine_product"] =
      sliced_intertwine(model, pack.pi, t, pack.bergman.defect_dim, degree, rq);
  pack.residuals["compression"] =
      spectral_norm(pack.pi.adjoint() * model * pack.pi - t);

  return pack;
}

DilationPack general_factor_dilation(const FactorPair& pair, int m, Index degree,
                                     double) {
  const SchurConstruction c = build_schur_construction(pair, m);
  const CMatrix& t = pair.product;
  const Index h = t.rows();
  const WeightTable table(m, static_cast<int>(degree) + 1);
  const TruncatedDilation td = canonical_pi(t, m, degree, table);
  const Index e = c.e_dim();
  const Index r = c.defect_dim();

  DilationPack pack;
  pack.bergman.order = m;
  pack.bergman.degree = degree;
  pack.bergman.defect_dim = e;
  pack.bergman.pi = CMatrix::Zero((degree + 1) * e, h);
  for (Index k = 0; k <= degree && r > 0; ++k) {
    pack.bergman.pi.middleRows(k * e, e) = c.v * td.pi.middleRows(k * r, r);
  }
  pack.bergman.isometry_defect = spectral_norm(
      pack.bergman.pi.adjoint() * pack.bergman.pi - CMatrix::Identity(h, h));

  QLimit limit = q_limit(t, m);
  if (!limit.converged) {
    throw ConvergenceError("general_factor_dilation: limit iteration did not converge");
  }
  pack.q = limit.q;
  pack.q_basis = limit.q_basis;
  pack.residuals["fixed_point"] = limit.fixed_point_residual;

  // The residual space must shrink under both factor adjoints.
  const CMatrix q_squared = limit.q_squared;
  for (int i = 1; i <= 2; ++i) {
    const CMatrix& ti = (i == 1) ? pair.t1 : pair.t2;
    const PsdCertificate cert =
        psd_check(q_squared - ti * q_squared * ti.adjoint());
    if (!cert.is_psd) {
      throw NotPsdError("claim failed: Q^2 >= T_" + std::to_string(i) +
                        " Q^2 T_" + std::to_string(i) + "* (min eigenvalue " +
                        std::to_string(cert.min_eigenvalue) + ")",
                        cert);
    }
    pack.residuals["q_invariance_" + std::to_string(i)] =
        std::max(0.0, -cert.min_eigenvalue / cert.scale);
  }

  const Index rq = pack.q_basis.cols();
  const CMatrix q_coords = pack.q_basis.adjoint() * pack.q;
  if (rq > 0) {
    const CMatrix x1 = douglas_solve(pair.t1 * pack.q, pack.q);
    const CMatrix x2 = douglas_solve(pair.t2 * pack.q, pack.q);
    const CMatrix x = douglas_solve(t * pack.q, pack.q);
    pack.w1 = residual_unitary(x1, pack.q_basis, "the first factor rotation");
    pack.w2 = residual_unitary(x2, pack.q_basis, "the second factor rotation");
    pack.w = residual_unitary(x, pack.q_basis, "the product rotation");
    pack.residuals["douglas_1"] =
        spectral_norm(x1.adjoint() * pack.q - pack.q * pair.t1.adjoint());
    pack.residuals["douglas_2"] =
        spectral_norm(x2.adjoint() * pack.q - pack.q * pair.t2.adjoint());
    pack.residuals["douglas_product"] =
        spectral_norm(x.adjoint() * pack.q - pack.q * t.adjoint());
    const Index n = rq;
    pack.residuals["w_unitary_1"] =
        (pack.w1.adjoint() * pack.w1 - CMatrix::Identity(n, n)).norm();
    pack.residuals["w_unitary_2"] =
        (pack.w2.adjoint() * pack.w2 - CMatrix::Identity(n, n)).norm();
    const double w_fact = std::max((pack.w - pack.w1 * pack.w2).norm(),
                                   (pack.w - pack.w2 * pack.w1).norm());
    pack.residuals["w_factorization"] = w_fact;
    pack.residuals["w_commute"] = (pack.w1 * pack.w2 - pack.w2 * pack.w1).norm();
    if (w_fact > 1e-8 * std::max<double>(1, n)) {
      throw FactorizationError("claim failed: the residual rotation does not factor "
                               "through the commuting pair (defect " +
                               std::to_string(w_fact) + ")");
    }
  } else {
    pack.w = pack.w1 = pack.w2 = CMatrix(0, 0);
    pack.residuals["douglas_1"] = pack.residuals["douglas_2"] = 0.0;
    pack.residuals["douglas_product"] = 0.0;
    pack.residuals["w_unitary_1"] = pack.residuals["w_unitary_2"] = 0.0;
    pack.residuals["w_factorization"] = pack.residuals["w_commute"] = 0.0;
  }

  pack.pi = stack(pack.bergman.pi, q_coords);
  pack.residuals["isometry_defect"] =
      spectral_norm(pack.pi.adjoint() * pack.pi - CMatrix::Identity(h, h));

  const CMatrix model_phi =
      direct_sum(model_operator(c.phi, m, degree, table).matrix, pack.w1);
  const CMatrix model_psi =
      direct_sum(model_operator(c.psi, m, degree, table).matrix, pack.w2);
  const CMatrix model_z = direct_sum(bergman_shift(e, m, degree, table).matrix, pack.w);
  pack.residuals["intertwine_t1"] =
      sliced_intertwine(model_phi, pack.pi, pair.t1, e, degree, rq);
  pack.residuals["intertwine_t2"] =
      sliced_intertwine(model_psi, pack.pi, pair.t2, e, degree, rq);
  pack.residuals["intertwine_product"] =
      sliced_intertwine(model_z, pack.pi, t, e, degree, rq);
  pack.residuals["compression_t1"] =
      spectral_norm(pack.pi.adjoint() * model_phi * pack.pi - pair.t1);
  pack.residuals["compression_t2"] =
      spectral_norm(pack.pi.adjoint() * model_psi * pack.pi - pair.t2);
  pack.residuals["compression_product"] =
      spectral_norm(pack.pi.adjoint() * model_z * pack.pi - t);

  return pack;
}

}  // namespace hyperfact
