#include "hyperfact/hyper.hpp"

#include <algorithm>
#include <cmath>

namespace hyperfact {

bool HyperReport::positive_at(int n) const {
  return std::find(orders_positive.begin(), orders_positive.end(), n) !=
         orders_positive.end();
}

bool HyperReport::hypercontraction_at(int m) const {
  return positive_at(1) && positive_at(m);
}

CMatrix hereditary_k_inverse(const CMatrix& t, int n) {
  ensure_square(t, "hereditary_k_inverse");
  ensure_finite(t, "hereditary_k_inverse");
  if (n < 0) throw PreconditionError("hereditary_k_inverse: order must be >= 0");
  const Index dim = t.rows();
  CMatrix sum = CMatrix::Identity(dim, dim);
  CMatrix power = CMatrix::Identity(dim, dim);  // T^k
  for (int k = 1; k <= n; ++k) {
    power = t * power;
    const double coeff = static_cast<double>(binomial(static_cast<std::uint64_t>(n),
                                                      static_cast<std::uint64_t>(k)));
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum.noalias() += (sign * coeff) * (power * power.adjoint());
  }
  return 0.5 * (sum + sum.adjoint());
}

HyperReport classify(const CMatrix& t, int m_max, double tolerance) {
  ensure_square(t, "classify");
  ensure_finite(t, "classify");
  if (m_max < 1) throw PreconditionError("classify: m_max must be >= 1");

  HyperReport report;
  report.operator_dim = t.rows();
  report.max_order_checked = m_max;
  report.operator_norm = spectral_norm(t);
  report.is_contraction = report.operator_norm <= 1.0 + tolerance;
  report.spectral_radius = spectral_radius(t);

  if (report.spectral_radius < 1.0 - tol::kPure) {
    report.is_pure = true;
  } else if (report.spectral_radius > 1.0 + tol::kPure) {
    report.is_pure = false;
  } else {
    // Borderline radius: fall back to power-norm decay, ||T^4096|| < 1e-8.
    // Transients of non-normal inputs can grow before they decay; bail out
    // once the powers are clearly not heading to zero.
    CMatrix power = t;
    bool diverged = false;
    for (int step = 0; step < 12 && !diverged; ++step) {
      power = power * power;
      diverged = !power.allFinite() || power.norm() > 1e12;
    }
    report.is_pure = !diverged && spectral_norm(power) < 1e-8;
  }

  report.certificates.reserve(static_cast<std::size_t>(m_max));
  for (int n = 1; n <= m_max; ++n) {
    PsdCertificate cert = psd_check(hereditary_k_inverse(t, n), tolerance);
    if (cert.is_psd) report.orders_positive.push_back(n);
    report.certificates.push_back(std::move(cert));
  }
  return report;
}

Defect defect(const CMatrix& t, int n, double tolerance) {
  if (n < 1) throw PreconditionError("defect: order must be >= 1");
  const RangedRoot ranged = psd_sqrt_ranged(hereditary_k_inverse(t, n), tolerance);
  Defect out;
  out.d = ranged.root;
  out.basis = ranged.basis;
  return out;
}

CMatrix f_r(const CMatrix& t, int n, int r, const WeightTable& table) {
  ensure_square(t, "f_r");
  ensure_finite(t, "f_r");
  if (n < 1) throw PreconditionError("f_r: order must be >= 1");
  if (r < 0) throw PreconditionError("f_r: index must be >= 0");
  if (r > 0 && !table.covers(n, r - 1)) {
    throw PreconditionError("f_r: weight table too small for (n, r) = (" +
                            std::to_string(n) + ", " + std::to_string(r) + ")");
  }
  const Index dim = t.rows();
  const CMatrix k_inv = hereditary_k_inverse(t, n);
  CMatrix sum = CMatrix::Identity(dim, dim);
  CMatrix power = CMatrix::Identity(dim, dim);  // T^k
  for (int k = 0; k < r; ++k) {
    if (k > 0) power = t * power;
    sum.noalias() -= table.weight_d(n, k) * (power * k_inv * power.adjoint());
  }
  return 0.5 * (sum + sum.adjoint());
}

QLimit q_limit(const CMatrix& t, int m, double convergence_tolerance, int r_max) {
  ensure_square(t, "q_limit");
  if (m < 1) throw PreconditionError("q_limit: order must be >= 1");
  if (r_max < 1) throw PreconditionError("q_limit: r_max must be >= 1");

  const CMatrix contraction_defect = hereditary_k_inverse(t, 1);
  const PsdCertificate order1 = psd_check(contraction_defect);
  if (!order1.is_psd) {
    throw NotPsdError("q_limit: operator is not a contraction", order1);
  }
  const CMatrix k_inv = hereditary_k_inverse(t, m);
  // Throws with the certificate when T is not hypercontractive at order m.
  const CMatrix d = psd_sqrt(k_inv);

  const Index dim = t.rows();
  QLimit out;
  CMatrix f = CMatrix::Identity(dim, dim);
  CMatrix z = d;  // T^r D
  double weight = 1.0;  // w(m, r), updated by w(m, r+1) = w(m, r) (m+r)/(r+1)
  int below = 0;
  int r = 0;
  out.converged = false;
  while (r < r_max) {
    const CMatrix step = weight * (z * z.adjoint());
    f.noalias() -= step;
    ++r;
    out.final_step_norm = step.norm();
    // A single small step can precede larger ones while the weights still
    // grow; require two consecutive sub-tolerance steps.
    below = out.final_step_norm < convergence_tolerance ? below + 1 : 0;
    if (below >= 2) {
      out.converged = true;
      break;
    }
    z = t * z;
    weight *= static_cast<double>(m + r - 1) / static_cast<double>(r);
  }
  out.iterations = r;

  // Clamp the limit onto the PSD cone, drop eigendirections below the
  // iteration resolution, and take the root in the same eigenbasis.
  const HermitianEig eig = hermitian_eig(0.5 * (f + f.adjoint()));
  const double top = eig.values.size() > 0 ? std::max(eig.values(0), 0.0) : 0.0;
  const double cut = std::max(tol::kRank * top, 1e3 * convergence_tolerance);
  Index rank = 0;
  while (rank < eig.values.size() && eig.values(rank) > cut) ++rank;
  RVector clamped = RVector::Zero(eig.values.size());
  RVector roots = RVector::Zero(eig.values.size());
  for (Index j = 0; j < rank; ++j) {
    clamped(j) = eig.values(j);
    roots(j) = std::sqrt(eig.values(j));
  }
  out.q_basis = eig.vectors.leftCols(rank);
  out.q_squared = eig.vectors * clamped.asDiagonal() * eig.vectors.adjoint();
  out.q_squared = 0.5 * (out.q_squared + out.q_squared.adjoint());
  out.q = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
  out.q = 0.5 * (out.q + out.q.adjoint());

  const double scale = std::max(1.0, spectral_norm(out.q_squared));
  out.fixed_point_residual =
      spectral_norm(t * out.q_squared * t.adjoint() - out.q_squared) / scale;
  return out;
}

}  // namespace hyperfact
