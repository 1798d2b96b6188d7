#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "hyperfact/hyper.hpp"
#include "hyperfact/matcore.hpp"
#include "hyperfact/randomgen.hpp"
#include "hyperfact/weights.hpp"

namespace hyperfact::testing {

// Oracle: Taylor coefficients of (1 - x)^(-n) by convolving the geometric
// series with itself, independent of any binomial formula.
inline std::vector<std::uint64_t> series_weights(int n, int k_max) {
  std::vector<std::uint64_t> coeffs(static_cast<std::size_t>(k_max) + 1, 1);  // n = 1
  for (int power = 2; power <= n; ++power) {
    std::vector<std::uint64_t> next(coeffs.size(), 0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      for (std::size_t j = 0; j <= k; ++j) next[k] += coeffs[j];
    }
    coeffs = std::move(next);
  }
  return coeffs;
}

// Oracle: eigenvalues of a 2x2 Hermitian matrix from its characteristic
// polynomial, descending.
inline std::pair<double, double> eig2(double a11, Complex a12, double a22) {
  const double mean = 0.5 * (a11 + a22);
  const double radius = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + std::norm(a12));
  return {mean + radius, mean - radius};
}

// Oracle: direct evaluation of I - sum_{k<r} w(n,k) T^k K T*^k without the
// incremental-power path used by the library.
inline CMatrix direct_f_r(const CMatrix& t, int n, int r, const WeightTable& table) {
  const Index dim = t.rows();
  CMatrix k_inv = CMatrix::Zero(dim, dim);
  for (int k = 0; k <= n; ++k) {
    CMatrix power = CMatrix::Identity(dim, dim);
    for (int j = 0; j < k; ++j) power = t * power;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    k_inv += sign * static_cast<double>(binomial(n, k)) * power * power.adjoint();
  }
  CMatrix out = CMatrix::Identity(dim, dim);
  for (int k = 0; k < r; ++k) {
    CMatrix power = CMatrix::Identity(dim, dim);
    for (int j = 0; j < k; ++j) power = t * power;
    out -= table.weight_d(n, k) * power * k_inv * power.adjoint();
  }
  return out;
}

// Random operator that classifies as an m-hypercontraction: spectral norm
// below sqrt(2^(1/m) - 1) forces every order up to m positive.
inline CMatrix random_hypercontraction(std::mt19937_64& rng, Index dim, int m) {
  const double bound = std::sqrt(std::pow(2.0, 1.0 / m) - 1.0);
  return random_contraction(rng, dim, 0.95 * std::min(1.0, bound));
}

inline CMatrix nilpotent_t(double r) {
  CMatrix t = CMatrix::Zero(2, 2);
  t(0, 1) = r;
  return t;
}

}  // namespace hyperfact::testing
