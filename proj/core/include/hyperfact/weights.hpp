#pragma once

#include <cstdint>
#include <vector>

#include "hyperfact/types.hpp"

namespace hyperfact {

// Exact C(n, k); 0 when k > n. Throws OverflowError instead of wrapping.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Exact integer table of the Bergman weights w(n, k) = C(n + k - 1, k),
// the Taylor coefficients of (1 - x)^(-n). Column 0 is identically 1 and
// w(n, k) - w(n, k - 1) = w(n - 1, k) holds exactly.
class WeightTable {
 public:
  WeightTable(int n_max, int k_max);

  int n_max() const { return n_max_; }
  int k_max() const { return k_max_; }

  // w(n, k) for 1 <= n <= n_max, 0 <= k <= k_max.
  std::uint64_t weight(int n, int k) const;
  double weight_d(int n, int k) const;

  // sqrt(w(n, k) / w(n, k + 1)), the k-th weighted-shift entry.
  double shift_ratio(int n, int k) const;

  bool covers(int n, int k) const;

 private:
  int n_max_;
  int k_max_;
  std::vector<std::vector<std::uint64_t>> rows_;  // rows_[n - 1][k]
};

WeightTable build_weight_table(int n_max, int k_max);

}  // namespace hyperfact
