#pragma once

#include <map>
#include <string>
#include <utility>

#include "hyperfact/factors.hpp"
#include "hyperfact/weights.hpp"

namespace hyperfact {

enum class PencilRole { Phi, Psi };

// Linear matrix pencil c0 + z c1 on a coefficient space E. The canonical
// pair built from a unitary U and projection P,
//   Phi(z) = (P + z P_perp) U*,   Psi(z) = U (P_perp + z P),
// satisfies Phi Psi = Psi Phi = z I and c0* c0 + c1* c1 = I exactly.
struct SchurPencil {
  CMatrix c0;
  CMatrix c1;
  PencilRole role = PencilRole::Phi;

  Index dim() const { return c0.rows(); }
  CMatrix at(Complex z) const { return c0 + z * c1; }
};

std::pair<SchurPencil, SchurPencil> canonical_pencils(const CMatrix& u, const CMatrix& p);

// Truncated multiplication operator on degrees 0..N of the order-m
// weighted Bergman space with fiber E: block (k, k) = c0 and block
// (k+1, k) = sqrt(w(m,k)/w(m,k+1)) c1. The shift is the (0, I) pencil.
struct ModelOperator {
  enum class Kind { Shift, Pencil };
  Kind kind = Kind::Pencil;
  CMatrix matrix;  // ((N+1) e) x ((N+1) e)
  int order = 1;
  Index degree = 0;
  Index fiber_dim = 0;
};

ModelOperator model_operator(const SchurPencil& pencil, int m, Index degree,
                             const WeightTable& table);
ModelOperator bergman_shift(Index fiber_dim, int m, Index degree,
                            const WeightTable& table);

// All the dilation data derived from a pair in F_m. Coordinates on E are
// ordered ancilla ⊕ D1 ⊕ D2, where Di is the range of the order-m pair
// defect of factor i and P projects onto the D2 block.
struct SchurConstruction {
  int m = 1;
  Index ancilla_dim = 0;
  CMatrix defect;        // D_{m,T}, the defect square root of the product
  CMatrix defect_basis;  // orthonormal basis of its range
  CMatrix d1;            // pair defect square roots on H
  CMatrix d2;
  CMatrix d1_basis;
  CMatrix d2_basis;
  CMatrix v;  // isometry: product-defect coordinates -> E
  CMatrix u;  // unitary on E matching the defect graph pairing
  CMatrix p;  // orthogonal projection onto the D2 block
  SchurPencil phi;
  SchurPencil psi;

  Index e_dim() const { return u.rows(); }
  Index defect_dim() const { return defect_basis.cols(); }
};

SchurConstruction build_schur_construction(const FactorPair& pair, int m,
                                           Index ancilla_dim = 0,
                                           double tolerance = tol::kPsd);

// The isometry V with V(D_{m,T} h) = (0, D1 h, D2 T1* h), in range-basis
// coordinates on both sides.
CMatrix build_special_v(const FactorPair& pair, int m, Index ancilla_dim = 0,
                        double tolerance = tol::kPsd);

// The unitary on E extending U(0, D1 T2* h, D2 h) = (0, D1 h, D2 T1* h).
CMatrix build_special_u(const FactorPair& pair, int m, Index ancilla_dim = 0,
                        double tolerance = tol::kPsd);

// Block colligations whose transfer functions realize the canonical pair:
//   U1 = [[U P, U i1], [i1*, 0]]  on E ⊕ (ancilla ⊕ D1),
//   U2 = [[P_perp U*, i2], [i2* U*, 0]]  on E ⊕ D2.
std::pair<CMatrix, CMatrix> transfer_unitaries(const SchurConstruction& c);

// Reads the pencil A* + z C* B* off a colligation [[A, B], [C, 0]] with
// top-left block of size e_dim.
SchurPencil transfer_pencil(const CMatrix& colligation, Index e_dim, PencilRole role);

// Coefficientwise compression c -> V* c V onto the product defect space.
// The compressed pair need not commute as pencils.
std::pair<SchurPencil, SchurPencil> compressed_symbols(const CMatrix& v,
                                                       const SchurPencil& phi,
                                                       const SchurPencil& psi);

// Residual report for the full factorization chain of a pair in F_m:
// intertwinings of the truncated dilation with the model operators, joint
// co-invariance of its range, compressed-symbol identities, and (for a
// non-pure product) the unitary-summand identities.
struct VerificationReport {
  bool pure_path = true;
  double tolerance = tol::kVerify;
  Index degree = 0;
  std::map<std::string, double> residuals;    // gate: pass iff <= tolerance
  std::map<std::string, double> diagnostics;  // informational only

  bool all_passed() const;
};

VerificationReport verify_factorization(const FactorPair& pair, int m, Index degree,
                                        double tolerance = tol::kVerify);

}  // namespace hyperfact
