#pragma once

#include <map>
#include <string>

#include "hyperfact/factors.hpp"
#include "hyperfact/weights.hpp"

namespace hyperfact {

// Truncation of the canonical dilation map H -> A^2_m(defect space) to
// degrees 0..N: block row k is sqrt(w(m,k)) D T*^k in range-basis
// coordinates of the defect D. Stacked shape ((N+1) d) x dim H.
struct TruncatedDilation {
  CMatrix pi;
  int order = 1;       // m
  Index degree = 0;    // N
  Index defect_dim = 0;
  double isometry_defect = 0.0;  // ||pi* pi - I||
};

TruncatedDilation canonical_pi(const CMatrix& t, int m, Index degree,
                               const WeightTable& table);

// Max over block rows 0..N-1 of the residual of M_z* pi = pi T*. Row N is
// excluded: its image under the shift adjoint needs degree N+1 data that
// the truncation discards.
double intertwine_residual(const TruncatedDilation& dil, const CMatrix& t);

// Isometric dilation of T (or of a factor pair) onto truncated Bergman
// space ⊕ residual space. The residual space is the range of Q with
// Q^2 = lim f_r; W (and W1, W2 in the factor case) act unitarily on its
// coordinates. `pi` stacks the Bergman block over the Q block.
struct DilationPack {
  TruncatedDilation bergman;  // Bergman part (composed with V when present)
  CMatrix pi;
  CMatrix q;        // Q on H
  CMatrix q_basis;  // orthonormal basis of ran Q
  CMatrix w;        // unitary on ran-Q coordinates; 0x0 when Q = 0
  CMatrix w1;       // factor case only
  CMatrix w2;
  std::map<std::string, double> residuals;

  Index residual_dim() const { return q_basis.cols(); }
};

DilationPack douglas_dilation(const CMatrix& t, int m, Index degree,
                              double tolerance = tol::kVerify);

// Dilation of (T1, T2, T1 T2) for a pair in F_m. Verifies
// Q^2 >= T_i Q^2 T_i*, solves X_i* Q = Q T_i*, checks that each X_i is
// unitary on ran Q and that X = X1 X2 = X2 X1, and assembles the three
// intertwinings against M_Phi ⊕ W1, M_Psi ⊕ W2, M_z ⊕ W.
DilationPack general_factor_dilation(const FactorPair& pair, int m, Index degree,
                                     double tolerance = tol::kVerify);

}  // namespace hyperfact
