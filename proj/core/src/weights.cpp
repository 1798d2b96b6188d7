#include "hyperfact/weights.hpp"

#include <numeric>

namespace hyperfact {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("binomial: 64-bit overflow; requested entry is not representable");
  }
  return out;
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  // Multiplicative formula. The running product after step i is
  // C(n - k + i, i), an integer, so i always cancels fully once the gcd
  // with the accumulator is divided out.
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    std::uint64_t factor = n - k + i;
    const std::uint64_t g = std::gcd(result, i);
    result /= g;
    std::uint64_t rem = i / g;
    const std::uint64_t g2 = std::gcd(factor, rem);
    factor /= g2;
    rem /= g2;
    if (rem != 1) {
      throw Error("binomial: internal cancellation failure");
    }
    result = checked_mul(result, factor);
  }
  return result;
}

WeightTable::WeightTable(int n_max, int k_max) : n_max_(n_max), k_max_(k_max) {
  if (n_max < 1) throw PreconditionError("WeightTable: n_max must be >= 1");
  if (k_max < 0) throw PreconditionError("WeightTable: k_max must be >= 0");
  rows_.resize(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    auto& row = rows_[static_cast<std::size_t>(n - 1)];
    row.resize(static_cast<std::size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) {
      row[static_cast<std::size_t>(k)] =
          binomial(static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(k) - 1,
                   static_cast<std::uint64_t>(k));
    }
  }
}

bool WeightTable::covers(int n, int k) const {
  return n >= 1 && n <= n_max_ && k >= 0 && k <= k_max_;
}

std::uint64_t WeightTable::weight(int n, int k) const {
  if (!covers(n, k)) {
    throw PreconditionError("WeightTable: entry (" + std::to_string(n) + ", " +
                            std::to_string(k) + ") outside table of size (" +
                            std::to_string(n_max_) + ", " + std::to_string(k_max_) + ")");
  }
  return rows_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)];
}

double WeightTable::weight_d(int n, int k) const {
  return static_cast<double>(weight(n, k));
}

double WeightTable::shift_ratio(int n, int k) const {
  return std::sqrt(weight_d(n, k) / weight_d(n, k + 1));
}

WeightTable build_weight_table(int n_max, int k_max) {
  return WeightTable(n_max, k_max);
}

}  // namespace hyperfact
