// Scaling of the dense saddle solve, the power function and the growth LP
// with the stencil size.

#include <benchmark/benchmark.h>

#include <random>

#include "stencilcert/accuracy.hpp"
#include "stencilcert/bounds.hpp"
#include "stencilcert/growth.hpp"
#include "stencilcert/stencil.hpp"

namespace sc = stencilcert;

namespace {

sc::StencilProblem planar_problem(int n) {
  std::mt19937 rng(9001);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  sc::Point z(2);
  z << 0.0, 0.0;
  std::vector<sc::Point> nodes;
  while (static_cast<int>(nodes.size()) < n) {
    sc::Point c(2);
    c << u(rng), u(rng);
    bool ok = (c - z).norm() > 0.05;
    for (const auto& o : nodes) ok = ok && (c - o).norm() > 0.02;
    if (ok) nodes.push_back(c);
  }
  return {sc::KernelSpec::polyharmonic(5.0, 3), sc::DiffOperator::laplacian(2),
          sc::PointSet{z, nodes}, 3};
}

void BM_ComputeWeights(benchmark::State& state) {
  auto problem = planar_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto result = sc::compute_weights(problem);
    benchmark::DoNotOptimize(result.weights);
  }
}

void BM_PowerFunction(benchmark::State& state) {
  auto problem = planar_problem(static_cast<int>(state.range(0)));
  auto result = sc::compute_weights(problem);
  for (auto _ : state) {
    auto report = sc::power_function(problem, result);
    benchmark::DoNotOptimize(report.p);
  }
}

void BM_GrowthDual(benchmark::State& state) {
  auto problem = planar_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto growth = sc::growth_dual(problem.points.center, problem.points.nodes,
                                  3, problem.op, 2.5);
    benchmark::DoNotOptimize(growth.value);
  }
}

void BM_MixedSeminormSampling(benchmark::State& state) {
  auto problem = planar_problem(16);
  for (auto _ : state) {
    double est = sc::mixed_kernel_seminorm_estimate(
        problem.kernel, problem.points, 2, 0.5,
        static_cast<int>(state.range(0)), 17);
    benchmark::DoNotOptimize(est);
  }
}

}  // namespace

BENCHMARK(BM_ComputeWeights)->RangeMultiplier(2)->Range(8, 128);
BENCHMARK(BM_PowerFunction)->RangeMultiplier(2)->Range(8, 128);
BENCHMARK(BM_GrowthDual)->RangeMultiplier(2)->Range(10, 80);
BENCHMARK(BM_MixedSeminormSampling)->RangeMultiplier(4)->Range(256, 16384);

BENCHMARK_MAIN();
