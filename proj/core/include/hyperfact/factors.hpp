#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hyperfact/hyper.hpp"

namespace hyperfact {

// A commuting pair (T1, T2) with product T = T1 T2. Construction rejects
// pairs whose commutator exceeds the tolerance; contractivity is reported
// through the order-1 certificates of check_fm rather than enforced here.
struct FactorPair {
  CMatrix t1;
  CMatrix t2;
  CMatrix product;
  double commutator_norm = 0.0;
};

FactorPair make_factor_pair(const CMatrix& t1, const CMatrix& t2,
                            double commute_tolerance = tol::kCommute);

// Pair defect at order n for factor i (1 or 2):
//   K_{n-1}^{-1}(T,T*) - T_i K_{n-1}^{-1}(T,T*) T_i*,   K_0 = I.
// Order 1 is the ordinary defect I - T_i T_i*.
CMatrix pair_defect(const FactorPair& pair, int n, int i);

struct FmReport {
  int m = 0;
  bool member = false;
  std::vector<int> orders_checked;  // 1..m
  // order_certificates[n - 1][i - 1] certifies the pair defect at order n.
  std::vector<std::array<PsdCertificate, 2>> order_certificates;
  std::array<PsdCertificate, 2> pair_defects_psd;  // order m, both factors
  HyperReport product_hyper;
  // Orders 1 and m positive must drag every intermediate order along;
  // false signals numerical breakdown, not a legitimate verdict.
  bool intermediate_chain_consistent = true;
};

FmReport check_fm(const FactorPair& pair, int m, double tolerance = tol::kPsd);

// || K_m^{-1}(T,T*) - (D1^2 + T1 D2^2 T1*) || / max(1, ||K_m^{-1}||) where
// Di^2 is the order-m pair defect; an exact identity for commuting pairs.
double sufficiency_residual(const FactorPair& pair, int m);

// Certifies K_n^{-1}(T,T*) >= 0 for n <= m through the decomposition above.
// Requires check_fm to pass at order m; a decomposition residual above
// 1e-10 (relative) signals internal inconsistency.
HyperReport product_hyper_from_membership(const FactorPair& pair, int m,
                                          double tolerance = tol::kPsd);

// The 2x2 family (T_r S^{-1}, S) with T_r = [[0,r],[0,0]], S = [[a,b],[0,a]].
// defect2 holds the closed-form order-2 pair defect for factor 2:
//   [[(1-r^2)(1-a^2) - b^2, -ab], [-ab, 1-a^2]].
struct SzegoInstance {
  FactorPair pair;
  CMatrix defect2;
};

// Preconditions, each reported by name on violation: 0 < r, r^2 <= 1/2
// (product a 2-hypercontraction), 0 < a, 0 <= b <= 1 - a^2 (S a
// contraction), r <= a (T_r S^{-1} a contraction).
SzegoInstance szego_counterexample(double r, double a, double b);

// Deterministic member of F_m: draws a random unitary/projection pair,
// forms the canonical multiplication pair on the truncated weighted
// Bergman space of the given degree, and compresses to a random jointly
// co-invariant subspace. Membership is verified before returning; fresh
// randomness is retried a bounded number of times on failure.
FactorPair generate_fm_pair(std::uint64_t seed, int base_dim, int m, int degree);

// Rejection-sampling fallback: commuting upper-triangular contractions.
// Not guaranteed to lie in F_m for m >= 2; intended for negative testing.
FactorPair generate_commuting_contractions(std::uint64_t seed, int dim);

}  // namespace hyperfact
