#include <vector>

#include <benchmark/benchmark.h>

#include "modelspace/boundary.hpp"
#include "modelspace/linalg.hpp"
#include "modelspace/model_space.hpp"
#include "modelspace/operators.hpp"
#include "modelspace/random.hpp"

using namespace modelspace;

namespace {

const QuadratureControl kControl{256, std::size_t{1} << 22, 1e-10};

ComplexMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  ComplexMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = rng.complex_normal();
  return m;
}

void BM_Svd(benchmark::State& state) {
  const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(svd(m));
}
BENCHMARK(BM_Svd)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_Fft(benchmark::State& state) {
  SplitMix64 rng(2);
  std::vector<Complex> data(static_cast<std::size_t>(state.range(0)));
  for (auto& z : data) z = rng.complex_normal();
  for (auto _ : state) {
    fft_in_place(data, false);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(16)->Range(256, 1 << 20);

void BM_BuildBasis(benchmark::State& state) {
  const auto spec = generate_zeros(zeros::RadialExponential{0.5}, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_basis(spec, kControl));
}
BENCHMARK(BM_BuildBasis)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_AssembleTto(benchmark::State& state) {
  const auto basis =
      build_basis(generate_zeros(zeros::RadialExponential{0.5}, static_cast<std::size_t>(state.range(0))), kControl);
  const auto phi = symbols::monomial(1);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_tto(phi, basis, kControl));
}
BENCHMARK(BM_AssembleTto)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
