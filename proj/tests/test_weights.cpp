#include <doctest.h>

#include "helpers.hpp"
#include "hyperfact/weights.hpp"

using namespace hyperfact;
namespace oracle = hyperfact::testing;

TEST_CASE("binomial agrees with a Pascal-triangle oracle") {
  constexpr int kMax = 40;
  std::vector<std::vector<std::uint64_t>> pascal(kMax + 1);
  for (int n = 0; n <= kMax; ++n) {
    pascal[n].assign(n + 1, 1);
    for (int k = 1; k < n; ++k) pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
  }
  for (int n = 0; n <= kMax; ++n) {
    for (int k = 0; k <= n; ++k) {
      CHECK(binomial(n, k) == pascal[n][k]);
    }
  }
}

TEST_CASE("binomial base cases") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(10, 5) == 252);
  CHECK(binomial(0, 0) == 1);
  for (std::uint64_t n : {0ULL, 1ULL, 7ULL, 64ULL}) CHECK(binomial(n, 0) == 1);
  CHECK(binomial(3, 5) == 0);
}

TEST_CASE("binomial overflow is an explicit error, never a wrap") {
  CHECK_THROWS_AS((void)binomial(200, 100), OverflowError);
  CHECK_NOTHROW((void)binomial(64, 32));
}

TEST_CASE("weight table matches the series-expansion oracle") {
  const WeightTable table(6, 48);
  for (int n = 1; n <= 6; ++n) {
    const auto series = oracle::series_weights(n, 48);
    for (int k = 0; k <= 48; ++k) {
      CHECK(table.weight(n, k) == series[static_cast<std::size_t>(k)]);
    }
  }
}

TEST_CASE("weight closed forms for small orders") {
  const WeightTable table(3, 16);
  for (int k = 0; k <= 16; ++k) {
    CHECK(table.weight(1, k) == 1);
    CHECK(table.weight(2, k) == static_cast<std::uint64_t>(k) + 1);
  }
  CHECK(table.weight(3, 2) == 6);
  for (int n = 1; n <= 3; ++n) CHECK(table.weight(n, 0) == 1);
}

TEST_CASE("weight recurrence w(n,k) - w(n,k-1) = w(n-1,k) holds exactly") {
  const WeightTable table(8, 64);
  for (int n = 2; n <= 8; ++n) {
    for (int k = 1; k <= 64; ++k) {
      CHECK(table.weight(n, k) - table.weight(n, k - 1) == table.weight(n - 1, k));
    }
  }
  CHECK(table.weight(3, 2) - table.weight(3, 1) == 3);
  CHECK(table.weight(2, 2) == 3);
}

TEST_CASE("summed form of the recurrence") {
  const WeightTable table(5, 24);
  for (int n = 2; n <= 5; ++n) {
    for (int k = 0; k <= 24; ++k) {
      std::uint64_t sum = 0;
      for (int j = 0; j <= k; ++j) sum += table.weight(n - 1, j);
      CHECK(table.weight(n, k) == sum);
    }
  }
}

TEST_CASE("weights are nondecreasing in both arguments and positive") {
  const WeightTable table(6, 32);
  for (int n = 1; n <= 6; ++n) {
    for (int k = 0; k <= 32; ++k) {
      CHECK(table.weight(n, k) >= 1);
      if (k > 0) CHECK(table.weight(n, k) >= table.weight(n, k - 1));
      if (n > 1) CHECK(table.weight(n, k) >= table.weight(n - 1, k));
    }
  }
}

TEST_CASE("out-of-range lookups and bad sizes throw") {
  const WeightTable table(3, 8);
  CHECK_THROWS_AS((void)table.weight(4, 0), PreconditionError);
  CHECK_THROWS_AS((void)table.weight(1, 9), PreconditionError);
  CHECK_THROWS_AS((void)table.weight(0, 0), PreconditionError);
  CHECK_THROWS_AS(WeightTable(0, 4), PreconditionError);
  CHECK_THROWS_AS(WeightTable(2, -1), PreconditionError);
}

TEST_CASE("shift ratios come from the exact integer entries") {
  const WeightTable table(2, 8);
  CHECK(table.shift_ratio(2, 0) == doctest::Approx(std::sqrt(1.0 / 2.0)).epsilon(1e-15));
  CHECK(table.shift_ratio(2, 1) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
  CHECK(table.shift_ratio(2, 2) == doctest::Approx(std::sqrt(3.0 / 4.0)).epsilon(1e-15));
  CHECK(table.shift_ratio(1, 5) == doctest::Approx(1.0).epsilon(1e-15));
}
