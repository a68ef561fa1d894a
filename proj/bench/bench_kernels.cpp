#include <map>

#include <benchmark/benchmark.h>

#include "greenline/archimedean.hpp"
#include "greenline/experiments.hpp"
#include "greenline/kernels.hpp"
#include "greenline/map_parser.hpp"

using namespace greenline;

namespace {

const kernels::Cloud& cloud(std::size_t atoms) {
  static std::map<std::size_t, kernels::Cloud> cache;
  auto it = cache.find(atoms);
  if (it == cache.end()) {
    const auto f = make_rational_map(ComplexField{}, parse_map("z^2 + 0.1").complex_lift());
    PreimageOptions opt;
    opt.depth = 14;
    opt.max_atoms = atoms;
    opt.budget = 1e6;
    it = cache.emplace(atoms, kernels::Cloud::of(preimage_measure(f.lift, choose_seed(f.lift), opt))).first;
  }
  return it->second;
}

void pair_serial(benchmark::State& s) {
  const auto& c = cloud(static_cast<std::size_t>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(kernels::pair_sum_serial(c, kernels::Kernel::affine, -1e6));
}
void pair_parallel(benchmark::State& s) {
  const auto& c = cloud(static_cast<std::size_t>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(kernels::pair_sum_parallel(c, kernels::Kernel::affine, -1e6));
}
void potentials_serial(benchmark::State& s) {
  const auto& c = cloud(static_cast<std::size_t>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(kernels::potentials_serial(c, c, kernels::Kernel::chordal, -1e6, true));
}
void potentials_parallel(benchmark::State& s) {
  const auto& c = cloud(static_cast<std::size_t>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(kernels::potentials_parallel(c, c, kernels::Kernel::chordal, -1e6, true));
}

void grid(benchmark::State& s, bool parallel) {
  const auto g = GreenEvaluator::of_map(make_rational_map(ComplexField{}, parse_map("z^2 - 1").complex_lift()));
  for (auto _ : s) benchmark::DoNotOptimize(emit_green_grid(g, Window{}, static_cast<int>(s.range(0)), parallel));
}
void grid_serial(benchmark::State& s) { grid(s, false); }
void grid_parallel(benchmark::State& s) { grid(s, true); }

}  // namespace

BENCHMARK(pair_serial)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(pair_parallel)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(potentials_serial)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(potentials_parallel)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(grid_serial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(grid_parallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
