#include <benchmark/benchmark.h>

#include <random>

#include "hyperfact/dilate.hpp"
#include "hyperfact/factors.hpp"
#include "hyperfact/hyper.hpp"
#include "hyperfact/randomgen.hpp"
#include "hyperfact/schur.hpp"

using namespace hyperfact;

namespace {

CMatrix bench_contraction(Index dim, double bound) {
  std::mt19937_64 rng(0xBE7C4);
  return random_contraction(rng, dim, bound);
}

void BM_hereditary_k_inverse(benchmark::State& state) {
  const CMatrix t = bench_contraction(state.range(0), 0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hereditary_k_inverse(t, 3));
  }
}
BENCHMARK(BM_hereditary_k_inverse)->Arg(8)->Arg(32)->Arg(96);

void BM_psd_sqrt(benchmark::State& state) {
  std::mt19937_64 rng(0xBE7C5);
  const CMatrix g = random_gaussian(rng, state.range(0), state.range(0));
  const CMatrix m = g * g.adjoint();
  for (auto _ : state) {
    benchmark::DoNotOptimize(psd_sqrt(m));
  }
}
BENCHMARK(BM_psd_sqrt)->Arg(16)->Arg(64);

void BM_q_limit(benchmark::State& state) {
  const CMatrix t = bench_contraction(state.range(0), 0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(q_limit(t, 2));
  }
}
BENCHMARK(BM_q_limit)->Arg(8)->Arg(24);

void BM_canonical_pi(benchmark::State& state) {
  const CMatrix t = bench_contraction(8, 0.6);
  const WeightTable table(2, static_cast<int>(state.range(0)) + 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(canonical_pi(t, 2, state.range(0), table));
  }
}
BENCHMARK(BM_canonical_pi)->Arg(16)->Arg(64);

void BM_check_fm(benchmark::State& state) {
  const FactorPair pair = generate_fm_pair(0xBE7C6, 3, 2, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_fm(pair, 2));
  }
}
BENCHMARK(BM_check_fm);

void BM_verify_factorization(benchmark::State& state) {
  const FactorPair pair = generate_fm_pair(0xBE7C7, 2, 2, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_factorization(pair, 2, state.range(0)));
  }
}
BENCHMARK(BM_verify_factorization)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
