#include "hyperfact/randomgen.hpp"

#include <cmath>

#include "hyperfact/matcore.hpp"

namespace hyperfact {

CMatrix random_gaussian(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      out(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return out;
}

CMatrix random_unitary(std::mt19937_64& rng, Index dim) {
  if (dim == 0) return CMatrix(0, 0);
  const CMatrix g = random_gaussian(rng, dim, dim);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the column phases so the distribution is Haar.
  for (Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_projection(std::mt19937_64& rng, Index dim, Index rank) {
  if (rank < 0 || rank > dim) {
    throw PreconditionError("random_projection: rank out of range");
  }
  const CMatrix u = random_unitary(rng, dim);
  const CMatrix basis = u.leftCols(rank);
  CMatrix p = basis * basis.adjoint();
  return 0.5 * (p + p.adjoint());
}

CMatrix random_contraction(std::mt19937_64& rng, Index dim, double norm_bound) {
  if (norm_bound < 0.0) {
    throw PreconditionError("random_contraction: negative norm bound");
  }
  CMatrix g = random_gaussian(rng, dim, dim);
  const double norm = spectral_norm(g);
  if (norm > 0.0) g *= norm_bound / norm;
  return g;
}

std::pair<CMatrix, CMatrix> random_commuting_unitaries(std::mt19937_64& rng, Index dim) {
  const CMatrix w = random_unitary(rng, dim);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  CVector d1(dim), d2(dim);
  for (Index j = 0; j < dim; ++j) {
    d1(j) = std::polar(1.0, angle(rng));
    d2(j) = std::polar(1.0, angle(rng));
  }
  CMatrix v1 = w * d1.asDiagonal() * w.adjoint();
  CMatrix v2 = w * d2.asDiagonal() * w.adjoint();
  return {v1, v2};
}

}  // namespace hyperfact
