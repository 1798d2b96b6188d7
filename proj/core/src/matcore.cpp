#include "hyperfact/matcore.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace hyperfact {

namespace {

Eigen::BDCSVD<CMatrix> thin_svd(const CMatrix& m) {
  return Eigen::BDCSVD<CMatrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

Index svd_rank(const Eigen::BDCSVD<CMatrix>& svd, double rank_tolerance) {
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0;
  const double cut = rank_tolerance * s(0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return rank;
}

}  // namespace

HermitianEig hermitian_eig(const CMatrix& m) {
  ensure_square(m, "hermitian_eig");
  ensure_finite(m, "hermitian_eig");
  HermitianEig out;
  if (m.rows() == 0) {
    out.values = RVector(0);
    out.vectors = CMatrix(0, 0);
    return out;
  }
  const double scale = m.norm();
  const double asymmetry = (m - m.adjoint()).norm();
  if (asymmetry > tol::kHermitian * std::max(1.0, scale)) {
    throw PreconditionError("hermitian_eig: input is not Hermitian (asymmetry " +
                            std::to_string(asymmetry) + ")");
  }
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("hermitian_eig: eigensolver failed to converge "
                           "within its iteration budget");
  }
  // Eigen returns ascending order; flip to descending.
  const Index n = m.rows();
  out.values = solver.eigenvalues().reverse();
  out.vectors = CMatrix(n, n);
  for (Index j = 0; j < n; ++j) {
    out.vectors.col(j) = solver.eigenvectors().col(n - 1 - j);
  }
  return out;
}

double spectral_norm(const CMatrix& m) {
  ensure_finite(m, "spectral_norm");
  if (m.size() == 0) return 0.0;
  const CMatrix gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (gram + gram.adjoint()),
                                                Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("spectral_norm: eigensolver failed to converge");
  }
  const double top = solver.eigenvalues().maxCoeff();
  return top > 0.0 ? std::sqrt(top) : 0.0;
}

double spectral_radius(const CMatrix& m) {
  ensure_square(m, "spectral_radius");
  ensure_finite(m, "spectral_radius");
  if (m.rows() == 0) return 0.0;
  Eigen::ComplexEigenSolver<CMatrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("spectral_radius: eigensolver failed to converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

PsdCertificate psd_check(const CMatrix& m, double tolerance) {
  PsdCertificate cert;
  cert.tolerance_used = tolerance;
  if (m.rows() == 0) {
    cert.is_psd = true;
    cert.scale = 1.0;
    return cert;
  }
  const HermitianEig eig = hermitian_eig(m);
  const Index last = eig.values.size() - 1;
  cert.min_eigenvalue = eig.values(last);
  cert.witness = eig.vectors.col(last);
  cert.scale = std::max(1.0, std::max(std::abs(eig.values(0)), std::abs(eig.values(last))));
  cert.is_psd = cert.min_eigenvalue >= -tolerance * cert.scale;
  return cert;
}

CMatrix psd_sqrt(const CMatrix& m, double tolerance) {
  const PsdCertificate cert = psd_check(m, tolerance);
  if (!cert.is_psd) {
    throw NotPsdError("psd_sqrt: input is not PSD (min eigenvalue " +
                      std::to_string(cert.min_eigenvalue) + ")",
                      cert);
  }
  if (m.rows() == 0) return CMatrix(0, 0);
  const HermitianEig eig = hermitian_eig(m);
  RVector roots(eig.values.size());
  for (Index j = 0; j < eig.values.size(); ++j) {
    roots(j) = eig.values(j) > 0.0 ? std::sqrt(eig.values(j)) : 0.0;
  }
  CMatrix s = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
  return 0.5 * (s + s.adjoint());
}

CMatrix range_basis(const CMatrix& m, double rank_tolerance) {
  ensure_finite(m, "range_basis");
  if (m.size() == 0) return CMatrix(m.rows(), 0);
  const auto svd = thin_svd(m);
  const Index rank = svd_rank(svd, rank_tolerance);
  return svd.matrixU().leftCols(rank);
}

RangedRoot psd_sqrt_ranged(const CMatrix& m, double tolerance, double rank_tolerance) {
  const PsdCertificate cert = psd_check(m, tolerance);
  if (!cert.is_psd) {
    throw NotPsdError("psd_sqrt_ranged: input is not PSD (min eigenvalue " +
                      std::to_string(cert.min_eigenvalue) + ")",
                      cert);
  }
  RangedRoot out;
  if (m.rows() == 0) {
    out.root = CMatrix(0, 0);
    out.basis = CMatrix(0, 0);
    return out;
  }
  const HermitianEig eig = hermitian_eig(m);
  const double cut = rank_tolerance * cert.scale;
  Index rank = 0;
  while (rank < eig.values.size() && eig.values(rank) > cut) ++rank;
  RVector roots = RVector::Zero(eig.values.size());
  for (Index j = 0; j < rank; ++j) roots(j) = std::sqrt(eig.values(j));
  out.root = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
  out.root = 0.5 * (out.root + out.root.adjoint());
  out.basis = eig.vectors.leftCols(rank);
  return out;
}

CMatrix pseudo_inverse(const CMatrix& m, double rank_tolerance) {
  ensure_finite(m, "pseudo_inverse");
  if (m.size() == 0) return CMatrix(m.cols(), m.rows());
  const auto svd = thin_svd(m);
  const Index rank = svd_rank(svd, rank_tolerance);
  const auto& s = svd.singularValues();
  CMatrix out = CMatrix::Zero(m.cols(), m.rows());
  for (Index j = 0; j < rank; ++j) {
    out.noalias() += (1.0 / s(j)) * svd.matrixV().col(j) * svd.matrixU().col(j).adjoint();
  }
  return out;
}

CMatrix orthonormalize_columns(const CMatrix& m, double rank_tolerance,
                               double scale_floor) {
  ensure_finite(m, "orthonormalize_columns");
  CMatrix work = m;
  const Index rows = m.rows();
  const Index cols = m.cols();
  if (rows == 0 || cols == 0) return CMatrix(rows, 0);

  double max_norm = 0.0;
  for (Index j = 0; j < cols; ++j) max_norm = std::max(max_norm, work.col(j).norm());
  const double cut = rank_tolerance * std::max(max_norm, scale_floor);
  if (max_norm <= cut) return CMatrix(rows, 0);

  CMatrix basis(rows, std::min(rows, cols));
  Index count = 0;
  std::vector<bool> used(static_cast<std::size_t>(cols), false);
  while (count < basis.cols()) {
    // Largest remaining column, ties to the lowest index.
    Index pivot = -1;
    double best = cut;
    for (Index j = 0; j < cols; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double nj = work.col(j).norm();
      if (nj > best) {
        best = nj;
        pivot = j;
      }
    }
    if (pivot < 0) break;
    used[static_cast<std::size_t>(pivot)] = true;
    CVector q = work.col(pivot);
    // One re-orthogonalization pass keeps the basis orthonormal near the cut.
    if (count > 0) {
      q -= basis.leftCols(count) * (basis.leftCols(count).adjoint() * q);
    }
    const double qn = q.norm();
    if (qn <= cut) continue;
    q /= qn;
    basis.col(count) = q;
    ++count;
    for (Index j = 0; j < cols; ++j) {
      if (!used[static_cast<std::size_t>(j)]) {
        work.col(j) -= q * (q.adjoint() * work.col(j));
      }
    }
  }
  return basis.leftCols(count);
}

CMatrix orthonormal_complement(const CMatrix& basis, Index ambient_dim) {
  if (basis.cols() > 0 && basis.rows() != ambient_dim) {
    throw DimensionError("orthonormal_complement: basis rows do not match ambient dimension");
  }
  CMatrix projector = CMatrix::Identity(ambient_dim, ambient_dim);
  if (basis.cols() > 0) projector -= basis * basis.adjoint();
  // The projector lives at unit scale; a full input basis leaves only
  // noise columns, which must not be promoted to rank.
  CMatrix complement = orthonormalize_columns(projector, tol::kRank, /*scale_floor=*/1.0);
  const Index expected = ambient_dim - basis.cols();
  if (complement.cols() != expected) {
    throw FactorizationError("orthonormal_complement: expected dimension " +
                             std::to_string(expected) + ", got " +
                             std::to_string(complement.cols()) +
                             " (input basis not orthonormal?)");
  }
  return complement;
}

CMatrix unitary_completion(const CMatrix& a, const CMatrix& b, Index ambient_dim) {
  if (a.cols() != b.cols()) {
    throw DimensionError("unitary_completion: domain and codomain bases have "
                         "different column counts");
  }
  if ((a.cols() > 0 && a.rows() != ambient_dim) || (b.cols() > 0 && b.rows() != ambient_dim)) {
    throw DimensionError("unitary_completion: basis rows do not match ambient dimension");
  }
  const Index k = a.cols();
  const CMatrix eye = CMatrix::Identity(k, k);
  const double gram_a = k > 0 ? (a.adjoint() * a - eye).norm() : 0.0;
  const double gram_b = k > 0 ? (b.adjoint() * b - eye).norm() : 0.0;
  if (gram_a > 1e-8 || gram_b > 1e-8) {
    throw PreconditionError("unitary_completion: columns are not orthonormal "
                            "(Gram defects " + std::to_string(gram_a) + ", " +
                            std::to_string(gram_b) + ")");
  }
  CMatrix u = CMatrix::Zero(ambient_dim, ambient_dim);
  if (k > 0) u = b * a.adjoint();
  const CMatrix ca = orthonormal_complement(a.cols() > 0 ? a : CMatrix(ambient_dim, 0), ambient_dim);
  const CMatrix cb = orthonormal_complement(b.cols() > 0 ? b : CMatrix(ambient_dim, 0), ambient_dim);
  if (ca.cols() > 0) u += cb * ca.adjoint();
  const double defect = (u.adjoint() * u - CMatrix::Identity(ambient_dim, ambient_dim)).norm();
  if (defect > tol::kUnitary * std::max<double>(1, ambient_dim)) {
    throw FactorizationError("unitary_completion: completion is not unitary (defect " +
                             std::to_string(defect) + ")");
  }
  return u;
}

CMatrix douglas_solve(const CMatrix& a, const CMatrix& b, double tolerance) {
  ensure_finite(a, "douglas_solve");
  ensure_finite(b, "douglas_solve");
  if (a.rows() != b.rows()) {
    throw DimensionError("douglas_solve: A and B must share their codomain");
  }
  const CMatrix gap = b * b.adjoint() - a * a.adjoint();
  const PsdCertificate cert = psd_check(gap, tolerance);
  if (!cert.is_psd) {
    throw NotPsdError("douglas_solve: A A* <= B B* fails (min eigenvalue " +
                      std::to_string(cert.min_eigenvalue) + ")",
                      cert);
  }
  const CMatrix c = pseudo_inverse(b) * a;
  const double residual = spectral_norm(b * c - a);
  const double bound = tol::kDouglas * std::max(1.0, spectral_norm(a));
  if (residual > bound) {
    throw FactorizationError("douglas_solve: ill-conditioned factorization, residual " +
                             std::to_string(residual));
  }
  const double cnorm = spectral_norm(c);
  if (cnorm > 1.0 + tol::kDouglas) {
    throw FactorizationError("douglas_solve: factor norm " + std::to_string(cnorm) +
                             " exceeds the contraction bound");
  }
  return c;
}

}  // namespace hyperfact
