// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "aapicard/assembly.hpp"

using namespace aapicard;

namespace {

std::shared_ptr<const TaylorHoodSpace> cavity_space(int n) {
  return std::make_shared<const TaylorHoodSpace>(build_space(barycentric_refine(unit_square_mesh(n)), cavity_conditions()));
}

std::vector<double> random_vector(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = uni(rng);
  return v;
}

void convection(benchmark::State& state, Execution exec) {
  const auto space = cavity_space(static_cast<int>(state.range(0)));
  Assembler assembler(space);
  const auto a = random_vector(space->num_velocity_dofs());
  for (auto _ : state) benchmark::DoNotOptimize(assembler.scalar_convection(a, exec));
  state.counters["elements"] = static_cast<double>(space->mesh().num_triangles());
}

void stiffness(benchmark::State& state, Execution exec) {
  Assembler assembler(cavity_space(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(assembler.scalar_stiffness(exec));
}

void matvec(benchmark::State& state, bool parallel) {
  const auto space = cavity_space(static_cast<int>(state.range(0)));
  const CsrMatrix k = assemble_stiffness(*space);
  const auto x = random_vector(k.cols());
  std::vector<double> y(k.rows());
  for (auto _ : state) {
    if (parallel) {
      spmv(k, x, y);
    } else {
      reference::spmv(k, x, y);
    }
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["nnz"] = static_cast<double>(k.nnz());
}

}  // namespace

BENCHMARK_CAPTURE(convection, parallel, Execution::parallel)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(convection, serial, Execution::serial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(stiffness, parallel, Execution::parallel)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(stiffness, serial, Execution::serial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(matvec, parallel, true)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(matvec, serial, false)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
