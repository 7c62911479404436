#include <benchmark/benchmark.h>

#include <random>

#include "walshlp/decomp.hpp"
#include "walshlp/martingale.hpp"
#include "walshlp/walsh.hpp"

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> v(n);
  for (double& x : v) x = gauss(rng);
  return v;
}

void BM_FwhtForward(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const std::vector<double> v = random_vector(std::size_t{1} << m, 1);
  for (auto _ : state) {
    auto c = walshlp::fwht_paley_forward(v);
    benchmark::DoNotOptimize(c);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FwhtForward)->DenseRange(4, 14, 2);

void BM_Transform2D(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const walshlp::Resolution res(m);
  walshlp::GridFunction f(res, random_vector(std::size_t{res.cells()} * res.cells(), 2));
  for (auto _ : state) {
    auto c = walshlp::walsh_transform_2d(f);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_Transform2D)->DenseRange(4, 9, 1);

void BM_SquareFunction(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const walshlp::Resolution res(m);
  walshlp::GridFunction f(res, random_vector(std::size_t{res.cells()} * res.cells(), 3));
  for (auto _ : state) {
    auto s = walshlp::square_function(f);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_SquareFunction)->DenseRange(4, 7, 1);

void BM_DecomposeRectangle(benchmark::State& state) {
  const walshlp::SpectralRectangle rect{{3, 501}, {17, 488}};
  for (auto _ : state) {
    auto dec = walshlp::decompose_rectangle(rect);
    benchmark::DoNotOptimize(dec);
  }
}
BENCHMARK(BM_DecomposeRectangle);

}  // namespace

BENCHMARK_MAIN();
