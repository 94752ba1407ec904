// Parallel kernels against their serial twins on 1D and 2D grids.
#include <benchmark/benchmark.h>

#include <vector>

#include "thermolens/grid.hpp"
#include "thermolens/kernels.hpp"

namespace {

using namespace thermolens;

Grid grid_for(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  return state.range(1) == 2 ? Grid::rect(1.0, 1.0, n, n) : Grid::line(1.0, n);
}

template <bool Parallel>
void BM_Laplacian(benchmark::State& state) {
  const Grid g = grid_for(state);
  const Field in = sine_mode(g, 3, 2);
  std::vector<double> out(g.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::laplacian(g, in.values, out);
    } else {
      kernels::serial::laplacian(g, in.values, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}

template <bool Parallel>
void BM_Dot(benchmark::State& state) {
  const Grid g = grid_for(state);
  const Field a = sine_mode(g, 1, 1);
  const Field b = sine_mode(g, 2, 1);
  for (auto _ : state) {
    double d = Parallel ? kernels::dot(a.values, b.values) : kernels::serial::dot(a.values, b.values);
    benchmark::DoNotOptimize(d);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}

template <bool Parallel>
void BM_SumPow3(benchmark::State& state) {
  const Grid g = grid_for(state);
  const Field a = sine_mode(g, 2, 3);
  for (auto _ : state) {
    double s = Parallel ? kernels::sum_pow(a.values, 3.0) : kernels::serial::sum_pow(a.values, 3.0);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}

template <bool Parallel>
void BM_Axpby(benchmark::State& state) {
  const Grid g = grid_for(state);
  const Field x = sine_mode(g, 1, 2);
  std::vector<double> y(g.size(), 1.0);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::axpby(0.5, x.values, 0.999, y);
    } else {
      kernels::serial::axpby(0.5, x.values, 0.999, y);
    }
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}

void sizes(benchmark::internal::Benchmark* b) {
  b->Args({4095, 1})->Args({262143, 1})->Args({255, 2})->Args({1023, 2});
}

}  // namespace

BENCHMARK(BM_Laplacian<true>)->Apply(sizes);
BENCHMARK(BM_Laplacian<false>)->Apply(sizes);
BENCHMARK(BM_Dot<true>)->Apply(sizes);
BENCHMARK(BM_Dot<false>)->Apply(sizes);
BENCHMARK(BM_SumPow3<true>)->Apply(sizes);
BENCHMARK(BM_SumPow3<false>)->Apply(sizes);
BENCHMARK(BM_Axpby<true>)->Apply(sizes);
BENCHMARK(BM_Axpby<false>)->Apply(sizes);

BENCHMARK_MAIN();
