// Microbenchmarks for the recovery algorithms and the incremental solver.
// Problem sizes follow the running-time protocol: M = ceil(K * log N).

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>

#include "cs/pursuit.hpp"
#include "cs/signal.hpp"

namespace {

struct Problem {
  cs::Matrix A;
  cs::Vector y;
};

Problem make_problem(int N, int K, std::uint64_t seed) {
  int M = static_cast<int>(std::ceil(K * std::log(static_cast<double>(N))));
  cs::SeededRng rng(seed);
  Problem p;
  p.A = cs::generate_sensing_matrix(M, N, rng);
  cs::SparseSignal x =
      cs::generate_sparse_signal(N, K, cs::SignalKind::Gaussian, rng);
  double sigma = cs::noise_sigma_for_smnr(K, M, 20.0, cs::SignalKind::Gaussian);
  p.y = cs::apply_measurement(p.A, x, cs::NoiseSpec::gaussian(sigma), rng);
  return p;
}

void run_algo(benchmark::State& state, cs::Algorithm algo, int L,
              double gamma) {
  const int N = static_cast<int>(state.range(0));
  const int K = static_cast<int>(state.range(1));
  Problem p = make_problem(N, K, 1234);
  cs::PursuitConfig config;
  config.sparsity = K;
  config.potential_atoms = std::min(L, K);
  config.gamma = gamma;
  for (auto _ : state) {
    cs::RecoveryResult result = cs::run_algorithm(algo, p.A, p.y, config);
    benchmark::DoNotOptimize(result.estimate.data());
  }
}

void BM_Omp(benchmark::State& s) { run_algo(s, cs::Algorithm::Omp, 1, 0.0); }
void BM_Ols(benchmark::State& s) { run_algo(s, cs::Algorithm::Ols, 1, 0.0); }
void BM_Sp(benchmark::State& s) { run_algo(s, cs::Algorithm::Sp, 1, 0.0); }
void BM_Pomp(benchmark::State& s) { run_algo(s, cs::Algorithm::Pomp, 10, 0.0); }
void BM_Laols(benchmark::State& s) {
  run_algo(s, cs::Algorithm::Laols, 10, 0.0);
}
void BM_Sols(benchmark::State& s) {
  run_algo(s, cs::Algorithm::Sols, 10, 0.5);
}

void SizeGrid(benchmark::internal::Benchmark* b) {
  b->Args({200, 10})->Args({500, 20})->Unit(benchmark::kMillisecond);
}

BENCHMARK(BM_Omp)->Apply(SizeGrid);
BENCHMARK(BM_Ols)->Apply(SizeGrid);
BENCHMARK(BM_Sp)->Apply(SizeGrid);
BENCHMARK(BM_Pomp)->Apply(SizeGrid);
BENCHMARK(BM_Laols)->Apply(SizeGrid);
BENCHMARK(BM_Sols)->Apply(SizeGrid);

// Incremental Gram-inverse growth versus a fresh direct solve at each size.
void BM_GramExtendChain(benchmark::State& state) {
  const int M = 100, N = 400, len = 20;
  cs::SeededRng rng(77);
  cs::Matrix A = cs::generate_sensing_matrix(M, N, rng);
  cs::Vector y(M);
  for (int i = 0; i < M; ++i) y[i] = rng.normal();
  for (auto _ : state) {
    cs::GramInverseState st = cs::gram_inverse_init(A, y, cs::SupportSet{0});
    for (int i = 1; i < len; ++i) st = cs::gram_inverse_extend(st, A, y, i);
    benchmark::DoNotOptimize(st.gram_inverse.data());
  }
}
BENCHMARK(BM_GramExtendChain)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
