#include "hyperfact/schur.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "hyperfact/dilate.hpp"

namespace hyperfact {

namespace {

void check_unitary(const CMatrix& u, const std::string& what) {
  ensure_square(u, what);
  const double defect =
      (u.adjoint() * u - CMatrix::Identity(u.rows(), u.rows())).norm();
  if (defect > tol::kUnitary * std::max<double>(1, u.rows())) {
    throw PreconditionError(what + ": matrix is not unitary (defect " +
                            std::to_string(defect) + ")");
  }
}

void check_projection(const CMatrix& p, const std::string& what) {
  ensure_square(p, what);
  const double herm = (p - p.adjoint()).norm();
  const double idem = (p * p - p).norm();
  if (herm > tol::kUnitary * std::max<double>(1, p.rows()) ||
      idem > tol::kUnitary * std::max<double>(1, p.rows())) {
    throw PreconditionError(what + ": matrix is not an orthogonal projection "
                            "(hermitian defect " + std::to_string(herm) +
                            ", idempotent defect " + std::to_string(idem) + ")");
  }
}

}  // namespace

std::pair<SchurPencil, SchurPencil> canonical_pencils(const CMatrix& u, const CMatrix& p) {
  check_unitary(u, "canonical_pencils");
  check_projection(p, "canonical_pencils");
  if (u.rows() != p.rows()) {
    throw DimensionError("canonical_pencils: unitary and projection sizes differ");
  }
  const CMatrix p_perp = CMatrix::Identity(p.rows(), p.rows()) - p;
  SchurPencil phi;
  phi.role = PencilRole::Phi;
  phi.c0 = p * u.adjoint();
  phi.c1 = p_perp * u.adjoint();
  SchurPencil psi;
  psi.role = PencilRole::Psi;
  psi.c0 = u * p_perp;
  psi.c1 = u * p;
  return {phi, psi};
}

ModelOperator model_operator(const SchurPencil& pencil, int m, Index degree,
                             const WeightTable& table) {
  if (m < 1) throw PreconditionError("model_operator: order must be >= 1");
  if (degree < 0) throw PreconditionError("model_operator: degree must be >= 0");
  if (!table.covers(m, static_cast<int>(degree))) {
    throw PreconditionError("model_operator: weight table too small for degree " +
                            std::to_string(degree));
  }
  const Index e = pencil.dim();
  const Index size = (degree + 1) * e;
  ModelOperator out;
  out.kind = ModelOperator::Kind::Pencil;
  out.order = m;
  out.degree = degree;
  out.fiber_dim = e;
  out.matrix = CMatrix::Zero(size, size);
  for (Index k = 0; k <= degree; ++k) {
    out.matrix.block(k * e, k * e, e, e) = pencil.c0;
    if (k < degree) {
      out.matrix.block((k + 1) * e, k * e, e, e) =
          table.shift_ratio(m, static_cast<int>(k)) * pencil.c1;
    }
  }
  return out;
}

ModelOperator bergman_shift(Index fiber_dim, int m, Index degree, const WeightTable& table) {
  SchurPencil shift;
  shift.role = PencilRole::Phi;
  shift.c0 = CMatrix::Zero(fiber_dim, fiber_dim);
  shift.c1 = CMatrix::Identity(fiber_dim, fiber_dim);
  ModelOperator out = model_operator(shift, m, degree, table);
  out.kind = ModelOperator::Kind::Shift;
  return out;
}

SchurConstruction build_schur_construction(const FactorPair& pair, int m,
                                           Index ancilla_dim, double tolerance) {
  if (ancilla_dim < 0) {
    throw PreconditionError("build_schur_construction: negative ancilla dimension");
  }
  const FmReport fm = check_fm(pair, m, tolerance);
  if (!fm.member) {
    const auto& certs = fm.pair_defects_psd;
    const PsdCertificate& bad = certs[0].is_psd ? certs[1] : certs[0];
    throw NotPsdError("build_schur_construction: pair is not in the factor class at "
                      "order " + std::to_string(m),
                      bad);
  }

  SchurConstruction c;
  c.m = m;
  c.ancilla_dim = ancilla_dim;
  const CMatrix& t = pair.product;
  const Index h = t.rows();

  const RangedRoot product_root = psd_sqrt_ranged(hereditary_k_inverse(t, m), tolerance);
  c.defect = product_root.root;
  c.defect_basis = product_root.basis;
  const RangedRoot root1 = psd_sqrt_ranged(pair_defect(pair, m, 1), tolerance);
  c.d1 = root1.root;
  c.d1_basis = root1.basis;
  const RangedRoot root2 = psd_sqrt_ranged(pair_defect(pair, m, 2), tolerance);
  c.d2 = root2.root;
  c.d2_basis = root2.basis;

  const Index r = c.defect_basis.cols();
  const Index r1 = c.d1_basis.cols();
  const Index r2 = c.d2_basis.cols();
  const Index e = ancilla_dim + r1 + r2;

  // Spanning images over h: V must send D h to (0, D1 h, D2 T1* h).
  const CMatrix defect_coords = c.defect_basis.adjoint() * c.defect;
  CMatrix image(e, h);
  image.topRows(ancilla_dim).setZero();
  image.middleRows(ancilla_dim, r1) = c.d1_basis.adjoint() * c.d1;
  image.bottomRows(r2) = c.d2_basis.adjoint() * c.d2 * pair.t1.adjoint();

  c.v = image * pseudo_inverse(defect_coords);
  const CMatrix v_resid = c.v * defect_coords - image;
  const double image_scale = std::max(1.0, image.norm());
  if (v_resid.norm() > 1e-8 * image_scale) {
    Index worst = 0;
    double worst_norm = 0.0;
    for (Index j = 0; j < h; ++j) {
      const double nj = v_resid.col(j).norm();
      if (nj > worst_norm) {
        worst_norm = nj;
        worst = j;
      }
    }
    throw FactorizationError(
        "build_schur_construction: defect-norm identity fails (residual " +
        std::to_string(v_resid.norm()) + ", worst on basis vector " +
        std::to_string(worst) + "); the pair is outside the class or numerics broke");
  }
  if (r > 0) {
    const double gram = (c.v.adjoint() * c.v - CMatrix::Identity(r, r)).norm();
    if (gram > 1e-8) {
      throw FactorizationError("build_schur_construction: V is not an isometry "
                               "(Gram defect " + std::to_string(gram) + ")");
    }
  }

  // Graph pairing (0, D1 T2* h, D2 h) -> (0, D1 h, D2 T1* h). Both Gram
  // matrices equal the product defect, so one eigenbasis orthonormalizes
  // both sides consistently.
  CMatrix domain(e, h);
  domain.topRows(ancilla_dim).setZero();
  domain.middleRows(ancilla_dim, r1) = c.d1_basis.adjoint() * c.d1 * pair.t2.adjoint();
  domain.bottomRows(r2) = c.d2_basis.adjoint() * c.d2;
  const CMatrix& target = image;

  CMatrix gram = 0.5 * (domain.adjoint() * domain + target.adjoint() * target);
  gram = 0.5 * (gram + gram.adjoint());
  const HermitianEig gram_eig = hermitian_eig(gram);
  const double top = gram_eig.values.size() > 0 ? std::max(gram_eig.values(0), 0.0) : 0.0;
  Index graph_dim = 0;
  while (graph_dim < gram_eig.values.size() &&
         gram_eig.values(graph_dim) > 1e-12 * std::max(top, 1e-300)) {
    ++graph_dim;
  }
  CMatrix domain_basis(e, graph_dim);
  CMatrix target_basis(e, graph_dim);
  for (Index j = 0; j < graph_dim; ++j) {
    const double scale = 1.0 / std::sqrt(gram_eig.values(j));
    domain_basis.col(j) = scale * (domain * gram_eig.vectors.col(j));
    target_basis.col(j) = scale * (target * gram_eig.vectors.col(j));
  }
  if (graph_dim > 0) {
    const CMatrix eye = CMatrix::Identity(graph_dim, graph_dim);
    const double od = (domain_basis.adjoint() * domain_basis - eye).norm();
    const double oi = (target_basis.adjoint() * target_basis - eye).norm();
    if (od > 1e-7 || oi > 1e-7) {
      throw FactorizationError("build_schur_construction: graph pairing is not "
                               "isometric (defects " + std::to_string(od) + ", " +
                               std::to_string(oi) + ")");
    }
  }

  c.u = unitary_completion(domain_basis, target_basis, e);
  const double action = (c.u * domain - target).norm();
  if (action > 1e-8 * std::max(1.0, target.norm())) {
    throw FactorizationError("build_schur_construction: unitary does not reproduce "
                             "the graph pairing (residual " + std::to_string(action) + ")");
  }

  c.p = CMatrix::Zero(e, e);
  c.p.bottomRightCorner(r2, r2) = CMatrix::Identity(r2, r2);

  auto pencils = canonical_pencils(c.u, c.p);
  c.phi = std::move(pencils.first);
  c.psi = std::move(pencils.second);
  return c;
}

CMatrix build_special_v(const FactorPair& pair, int m, Index ancilla_dim, double tolerance) {
  return build_schur_construction(pair, m, ancilla_dim, tolerance).v;
}

CMatrix build_special_u(const FactorPair& pair, int m, Index ancilla_dim, double tolerance) {
  return build_schur_construction(pair, m, ancilla_dim, tolerance).u;
}

std::pair<CMatrix, CMatrix> transfer_unitaries(const SchurConstruction& c) {
  const Index e = c.e_dim();
  const Index r1 = c.d1_basis.cols();
  const Index r2 = c.d2_basis.cols();
  const Index a1 = c.ancilla_dim + r1;  // ancilla ⊕ D1 block

  CMatrix iota1 = CMatrix::Zero(e, a1);
  iota1.topRows(a1) = CMatrix::Identity(a1, a1);
  CMatrix iota2 = CMatrix::Zero(e, r2);
  iota2.bottomRows(r2) = CMatrix::Identity(r2, r2);

  CMatrix u1 = CMatrix::Zero(e + a1, e + a1);
  u1.topLeftCorner(e, e) = c.u * c.p;
  u1.topRightCorner(e, a1) = c.u * iota1;
  u1.bottomLeftCorner(a1, e) = iota1.adjoint();

  const CMatrix p_perp = CMatrix::Identity(e, e) - c.p;
  CMatrix u2 = CMatrix::Zero(e + r2, e + r2);
  u2.topLeftCorner(e, e) = p_perp * c.u.adjoint();
  u2.topRightCorner(e, r2) = iota2;
  u2.bottomLeftCorner(r2, e) = iota2.adjoint() * c.u.adjoint();

  check_unitary(u1, "transfer_unitaries (U1)");
  check_unitary(u2, "transfer_unitaries (U2)");
  return {u1, u2};
}

SchurPencil transfer_pencil(const CMatrix& colligation, Index e_dim, PencilRole role) {
  ensure_square(colligation, "transfer_pencil");
  if (e_dim < 0 || e_dim > colligation.rows()) {
    throw DimensionError("transfer_pencil: coefficient block exceeds the colligation");
  }
  const Index rest = colligation.rows() - e_dim;
  const CMatrix a = colligation.topLeftCorner(e_dim, e_dim);
  const CMatrix b = colligation.topRightCorner(e_dim, rest);
  const CMatrix cc = colligation.bottomLeftCorner(rest, e_dim);
  SchurPencil out;
  out.role = role;
  out.c0 = a.adjoint();
  out.c1 = cc.adjoint() * b.adjoint();
  return out;
}

std::pair<SchurPencil, SchurPencil> compressed_symbols(const CMatrix& v,
                                                       const SchurPencil& phi,
                                                       const SchurPencil& psi) {
  if (v.rows() != phi.dim() || v.rows() != psi.dim()) {
    throw DimensionError("compressed_symbols: isometry does not map into the "
                         "pencil space");
  }
  SchurPencil phi_tilde;
  phi_tilde.role = PencilRole::Phi;
  phi_tilde.c0 = v.adjoint() * phi.c0 * v;
  phi_tilde.c1 = v.adjoint() * phi.c1 * v;
  SchurPencil psi_tilde;
  psi_tilde.role = PencilRole::Psi;
  psi_tilde.c0 = v.adjoint() * psi.c0 * v;
  psi_tilde.c1 = v.adjoint() * psi.c1 * v;
  return {phi_tilde, psi_tilde};
}

bool VerificationReport::all_passed() const {
  for (const auto& [name, value] : residuals) {
    if (!(value <= tolerance)) return false;
  }
  return true;
}

namespace {

// Applies V to every degree block of a stacked dilation matrix.
CMatrix embed_blocks(const CMatrix& stacked, const CMatrix& v, Index block_rows,
                     Index blocks) {
  CMatrix out = CMatrix::Zero(blocks * v.rows(), stacked.cols());
  for (Index k = 0; k < blocks && block_rows > 0; ++k) {
    out.middleRows(k * v.rows(), v.rows()) =
        v * stacked.middleRows(k * block_rows, block_rows);
  }
  return out;
}

// Residual of model* pi = pi t*, sliced to the rows the truncation keeps
// exact: Bergman degrees 0..N-1 plus the entire residual-space block.
double sliced_intertwine(const CMatrix& model, const CMatrix& pi, const CMatrix& t,
                         Index fiber, Index degree, Index q_rows) {
  const CMatrix resid = model.adjoint() * pi - pi * t.adjoint();
  const Index bergman_keep = degree * fiber;
  CMatrix kept(bergman_keep + q_rows, resid.cols());
  kept.topRows(bergman_keep) = resid.topRows(bergman_keep);
  if (q_rows > 0) kept.bottomRows(q_rows) = resid.bottomRows(q_rows);
  return spectral_norm(kept);
}

double coinvariance_residual(const CMatrix& model, const CMatrix& range) {
  if (range.cols() == 0) return 0.0;
  const CMatrix pulled = model.adjoint() * range;
  return spectral_norm(pulled - range * (range.adjoint() * pulled));
}

CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace

VerificationReport verify_factorization(const FactorPair& pair, int m, Index degree,
                                        double tolerance) {
  if (degree < 1) throw PreconditionError("verify_factorization: degree must be >= 1");
  VerificationReport report;
  report.tolerance = tolerance;
  report.degree = degree;

  const SchurConstruction c = build_schur_construction(pair, m);
  const CMatrix& t = pair.product;
  const WeightTable table(m, static_cast<int>(degree) + 1);
  const TruncatedDilation td = canonical_pi(t, m, degree, table);
  const Index e = c.e_dim();
  const Index r = c.defect_dim();

  const CMatrix pi_v = embed_blocks(td.pi, c.v, r, degree + 1);
  const ModelOperator m_phi = model_operator(c.phi, m, degree, table);
  const ModelOperator m_psi = model_operator(c.psi, m, degree, table);
  const ModelOperator m_z = bergman_shift(e, m, degree, table);

  const HyperReport product_report = classify(t, m);
  report.pure_path = product_report.is_pure;

  const auto [phi_tilde, psi_tilde] = compressed_symbols(c.v, c.phi, c.psi);
  const ModelOperator m_phi_tilde = model_operator(phi_tilde, m, degree, table);
  const ModelOperator m_psi_tilde = model_operator(psi_tilde, m, degree, table);
  const ModelOperator m_z_defect = bergman_shift(r, m, degree, table);

  // Witness that the compressed pair need not multiply to the shift symbol.
  report.diagnostics["pencil_product_gap"] = std::max(
      {(phi_tilde.c0 * psi_tilde.c0).norm(),
       (phi_tilde.c0 * psi_tilde.c1 + phi_tilde.c1 * psi_tilde.c0 -
        CMatrix::Identity(r, r)).norm(),
       (phi_tilde.c1 * psi_tilde.c1).norm()});

  if (report.pure_path) {
    report.residuals["isometry_defect"] = td.isometry_defect;
    report.residuals["intertwine_t1"] =
        sliced_intertwine(m_phi.matrix, pi_v, pair.t1, e, degree, 0);
    report.residuals["intertwine_t2"] =
        sliced_intertwine(m_psi.matrix, pi_v, pair.t2, e, degree, 0);
    report.residuals["intertwine_product"] =
        sliced_intertwine(m_z.matrix, pi_v, t, e, degree, 0);

    const CMatrix range = range_basis(pi_v);
    report.residuals["coinvariance_t1"] = coinvariance_residual(m_phi.matrix, range);
    report.residuals["coinvariance_t2"] = coinvariance_residual(m_psi.matrix, range);
    report.residuals["coinvariance_product"] = coinvariance_residual(m_z.matrix, range);

    report.residuals["intertwine_t1_compressed"] =
        sliced_intertwine(m_phi_tilde.matrix, td.pi, pair.t1, r, degree, 0);
    report.residuals["intertwine_t2_compressed"] =
        sliced_intertwine(m_psi_tilde.matrix, td.pi, pair.t2, r, degree, 0);

    const CMatrix range_defect = range_basis(td.pi);
    const CMatrix shift_gap_1 =
        m_z_defect.matrix - m_phi_tilde.matrix * m_psi_tilde.matrix;
    const CMatrix shift_gap_2 =
        m_z_defect.matrix - m_psi_tilde.matrix * m_phi_tilde.matrix;
    report.residuals["compression_shift_phi_psi"] =
        spectral_norm(range_defect.adjoint() * shift_gap_1 * range_defect);
    report.residuals["compression_shift_psi_phi"] =
        spectral_norm(range_defect.adjoint() * shift_gap_2 * range_defect);
    return report;
  }

  // Non-pure product: rebuild the residual-space data and verify on the
  // Bergman ⊕ residual models.
  const DilationPack pack = general_factor_dilation(pair, m, degree, tolerance);
  for (const auto& [name, value] : pack.residuals) {
    report.residuals[name] = value;
  }

  const Index q_rows = pack.residual_dim();
  const CMatrix q_coords = pack.q_basis.adjoint() * pack.q;
  CMatrix pi_defect(td.pi.rows() + q_rows, td.pi.cols());
  pi_defect.topRows(td.pi.rows()) = td.pi;
  pi_defect.bottomRows(q_rows) = q_coords;

  report.residuals["intertwine_t1_compressed"] =
      sliced_intertwine(direct_sum(m_phi_tilde.matrix, pack.w1), pi_defect, pair.t1, r,
                        degree, q_rows);
  report.residuals["intertwine_t2_compressed"] =
      sliced_intertwine(direct_sum(m_psi_tilde.matrix, pack.w2), pi_defect, pair.t2, r,
                        degree, q_rows);

  const CMatrix range_defect = range_basis(pi_defect);
  const CMatrix shift_full = direct_sum(m_z_defect.matrix, pack.w);
  const CMatrix prod_1 = direct_sum(
      CMatrix(m_phi_tilde.matrix * m_psi_tilde.matrix), pack.w);
  const CMatrix prod_2 = direct_sum(
      CMatrix(m_psi_tilde.matrix * m_phi_tilde.matrix), pack.w);
  report.residuals["compression_shift_phi_psi"] =
      spectral_norm(range_defect.adjoint() * (shift_full - prod_1) * range_defect);
  report.residuals["compression_shift_psi_phi"] =
      spectral_norm(range_defect.adjoint() * (shift_full - prod_2) * range_defect);
  return report;
}

}  // namespace hyperfact
