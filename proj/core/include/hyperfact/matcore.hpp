#pragma once

#include <utility>

#include "hyperfact/types.hpp"

namespace hyperfact {

// Outcome of a positivity test. The verdict is relative:
// is_psd  <=>  min_eigenvalue >= -tolerance_used * scale,
// where scale = max(1, ||M||).
struct PsdCertificate {
  bool is_psd = true;
  double min_eigenvalue = 0.0;
  double tolerance_used = 0.0;
  double scale = 1.0;
  CVector witness;  // eigenvector attaining the minimal eigenvalue
};

class NotPsdError : public Error {
 public:
  NotPsdError(const std::string& what, PsdCertificate cert)
      : Error(what), cert_(std::move(cert)) {}
  const PsdCertificate& certificate() const { return cert_; }

 private:
  PsdCertificate cert_;
};

struct HermitianEig {
  RVector values;   // descending
  CMatrix vectors;  // unitary; column j pairs with values[j]
};

// Eigendecomposition of (M + M*)/2. Inputs further than tol::kHermitian
// from Hermitian (relative) are rejected.
HermitianEig hermitian_eig(const CMatrix& m);

double spectral_norm(const CMatrix& m);
double spectral_radius(const CMatrix& m);

PsdCertificate psd_check(const CMatrix& m, double tolerance = tol::kPsd);

// Hermitian PSD square root via eigendecomposition; eigenvalues within
// the tolerance band below zero are clamped to zero. Throws NotPsdError
// (carrying the certificate) when the input fails psd_check.
CMatrix psd_sqrt(const CMatrix& m, double tolerance = tol::kPsd);

// Orthonormal basis of the column space; rank counts singular values
// above rank_tolerance * sigma_max. Zero matrix gives a zero-column result.
CMatrix range_basis(const CMatrix& m, double rank_tolerance = tol::kRank);

// Spectral root with an explicit range. Eigendirections at or below
// rank_tolerance * max(1, |lambda|_max) are dropped from both the root and
// the basis, keeping the two rank-consistent: the square root of a
// clamped near-zero eigenvalue would otherwise inject sqrt(eps)-size
// directions that no sigma-relative cut can recognize as noise.
struct RangedRoot {
  CMatrix root;
  CMatrix basis;
};
RangedRoot psd_sqrt_ranged(const CMatrix& m, double tolerance = tol::kPsd,
                           double rank_tolerance = tol::kRank);

// Moore-Penrose inverse with the same rank threshold.
CMatrix pseudo_inverse(const CMatrix& m, double rank_tolerance = tol::kRank);

// Orthonormal basis of columns, deterministic column-pivoted Gram-Schmidt
// (largest remaining norm first, ties by lowest index). Columns below
// rank_tolerance * max(largest column norm, scale_floor) are treated as zero.
CMatrix orthonormalize_columns(const CMatrix& m, double rank_tolerance = tol::kRank,
                               double scale_floor = 0.0);

// Deterministic orthonormal basis of the orthogonal complement of
// span(basis) inside C^ambient_dim, via pivoted orthogonalization of
// I - basis * basis^*.
CMatrix orthonormal_complement(const CMatrix& basis, Index ambient_dim);

// Unitary U on C^ambient_dim with U * a = b. Columns of a and b must be
// orthonormal families of equal size; the complements are paired in the
// deterministic order produced by orthonormal_complement.
CMatrix unitary_completion(const CMatrix& a, const CMatrix& b, Index ambient_dim);

// Contraction C with A = B C, existing when A A* <= B B* (checked through
// psd_check at `tolerance`). Computed as pinv(B) * A, then residual- and
// norm-checked; maps into the row space of B.
CMatrix douglas_solve(const CMatrix& a, const CMatrix& b, double tolerance = tol::kPsd);

}  // namespace hyperfact
