// OpenMP kernels against their serial references. Set LSPEC_NUM_THREADS to
// choose the worker count.

#include <benchmark/benchmark.h>

#include <map>
#include <numeric>

#include "lspec/kernels.hpp"
#include "lspec/levelstats.hpp"
#include "lspec/threading.hpp"

namespace {

using namespace lspec;

const std::vector<cplx>& points(Index n) {
  static std::map<Index, std::vector<cplx>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, sample_uniform_disk(n, 1)).first;
  return it->second;
}

std::vector<Index> all(Index n) {
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  return idx;
}

template <bool Parallel>
void BM_TwoNearest(benchmark::State& state) {
  const auto& p = points(state.range(0));
  const auto q = all(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? kernels::two_nearest(p, q) : kernels::serial::two_nearest(p, q));
  }
}

void BM_TwoNearestBucketed(benchmark::State& state) {
  const auto& p = points(state.range(0));
  const auto q = all(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::two_nearest_bucketed(p, q));
}

template <bool Parallel>
void BM_KthNeighbor(benchmark::State& state) {
  const auto& p = points(state.range(0));
  const Index k = state.range(0) / 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? kernels::kth_neighbor_distance(p, k)
                                      : kernels::serial::kth_neighbor_distance(p, k));
  }
}

template <bool Parallel>
void BM_KernelDensity(benchmark::State& state) {
  const auto& p = points(state.range(0));
  const auto q = all(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? kernels::kernel_density(p, q, 0.1, kernels::DensityKernel::Printed)
                                      : kernels::serial::kernel_density(p, q, 0.1, kernels::DensityKernel::Printed));
  }
}

template <bool Parallel>
void BM_SigmaMinGrid(benchmark::State& state) {
  const ComplexMatrix m = ginue_matrix(state.range(0), 3);
  std::vector<double> axis(8);
  for (std::size_t i = 0; i < axis.size(); ++i) axis[i] = -1.0 + 0.25 * static_cast<double>(i);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? kernels::sigma_min_grid(m, axis, axis)
                                      : kernels::serial::sigma_min_grid(m, axis, axis));
  }
}

BENCHMARK(BM_TwoNearest<true>)->Name("two_nearest/parallel")->Arg(2000)->Arg(8000);
BENCHMARK(BM_TwoNearest<false>)->Name("two_nearest/serial")->Arg(2000)->Arg(8000);
BENCHMARK(BM_TwoNearestBucketed)->Name("two_nearest/bucketed")->Arg(2000)->Arg(8000);
BENCHMARK(BM_KthNeighbor<true>)->Name("kth_neighbor/parallel")->Arg(2000)->Arg(8000);
BENCHMARK(BM_KthNeighbor<false>)->Name("kth_neighbor/serial")->Arg(2000)->Arg(8000);
BENCHMARK(BM_KernelDensity<true>)->Name("kernel_density/parallel")->Arg(2000)->Arg(8000);
BENCHMARK(BM_KernelDensity<false>)->Name("kernel_density/serial")->Arg(2000)->Arg(8000);
BENCHMARK(BM_SigmaMinGrid<true>)->Name("sigma_min_grid/parallel")->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SigmaMinGrid<false>)->Name("sigma_min_grid/serial")->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  lspec::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
