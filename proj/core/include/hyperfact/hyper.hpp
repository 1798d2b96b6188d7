#pragma once

#include <vector>

#include "hyperfact/matcore.hpp"
#include "hyperfact/weights.hpp"

namespace hyperfact {

// Classification of a single operator: which hereditary defects
// K_n^{-1}(T,T*) = sum_k (-1)^k C(n,k) T^k T*^k are positive, and whether
// the powers of T* decay (purity; spectral radius < 1 in finite dimension).
struct HyperReport {
  Index operator_dim = 0;
  int max_order_checked = 0;
  bool is_contraction = false;
  double operator_norm = 0.0;
  double spectral_radius = 0.0;
  bool is_pure = false;
  std::vector<int> orders_positive;
  std::vector<PsdCertificate> certificates;  // certificates[n - 1] for order n

  bool positive_at(int n) const;
  // m-hypercontraction at order m: orders 1 and m both positive.
  bool hypercontraction_at(int m) const;
};

// K_n^{-1}(T, T*); exactly Hermitian (symmetrized after summation).
CMatrix hereditary_k_inverse(const CMatrix& t, int n);

HyperReport classify(const CMatrix& t, int m_max, double tolerance = tol::kPsd);

struct Defect {
  CMatrix d;      // positive square root of K_n^{-1}(T, T*)
  CMatrix basis;  // orthonormal basis of its range
};

Defect defect(const CMatrix& t, int n, double tolerance = tol::kPsd);

// f_r = I - sum_{k<r} w(n,k) T^k K_n^{-1}(T,T*) T*^k; f_0 = I.
CMatrix f_r(const CMatrix& t, int n, int r, const WeightTable& table);

struct QLimit {
  CMatrix q_squared;  // Hermitian PSD limit of the f_r sequence
  CMatrix q;          // its positive square root
  CMatrix q_basis;    // orthonormal basis of ran Q, consistent with the cut below
  int iterations = 0;
  double final_step_norm = 0.0;
  bool converged = true;
  double fixed_point_residual = 0.0;  // ||T q_squared T* - q_squared||, relative
};

// Limit of the decreasing sequence f_r at order m. Steps are assembled as
// w(m,r) (T^r D)(T^r D)* with D = psd_sqrt(K_m^{-1}), so each decrement is
// PSD by construction. Stops when two consecutive steps fall below
// convergence_tolerance or at r_max (then flagged non-converged). The final
// iterate is clamped onto the PSD cone and eigendirections below the
// iteration resolution (max of the rank threshold and 1e3 x the convergence
// tolerance) are dropped; they cannot be distinguished from tail noise.
QLimit q_limit(const CMatrix& t, int m,
               double convergence_tolerance = tol::kConvergence,
               int r_max = kLimitMaxIterations);

}  // namespace hyperfact
