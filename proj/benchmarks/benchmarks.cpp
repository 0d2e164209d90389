#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "plq/epssub_graph.hpp"
#include "plq/epssub_point.hpp"
#include "plq/function.hpp"
#include "plq/oracle.hpp"

namespace {

constexpr double kEps = 0.5;
constexpr std::uint64_t kSeed = 1;

std::vector<double> query_points(const plq::PlqFunction& f, std::size_t m) {
  std::mt19937_64 rng(kSeed);
  const double lo = f.breakpoint(0);
  const double hi = f.breakpoint(f.last_index() - 1);
  std::vector<double> xs(m);
  for (double& x : xs) {
    x = lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  }
  return xs;
}

void BM_EpsSubPointFast(benchmark::State& state) {
  const auto f =
      plq::generate_convex_plq(static_cast<std::size_t>(state.range(0)),
                               kSeed);
  const auto xs = query_points(f, 64);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        plq::eps_subdifferential(f, xs[k++ % xs.size()], kEps));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EpsSubPointFast)->RangeMultiplier(10)->Range(40, 40000)
    ->Complexity(benchmark::oLogN);

void BM_EpsSubPointOracle(benchmark::State& state) {
  const auto f =
      plq::generate_convex_plq(static_cast<std::size_t>(state.range(0)),
                               kSeed);
  const auto xs = query_points(f, 64);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        plq::oracle::eps_sub_reference(f, xs[k++ % xs.size()], kEps));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EpsSubPointOracle)->RangeMultiplier(10)->Range(40, 40000)
    ->Complexity(benchmark::oN);

void BM_BuildLowerTable(benchmark::State& state) {
  const auto f =
      plq::generate_convex_plq(static_cast<std::size_t>(state.range(0)),
                               kSeed);
  for (auto _ : state) {
    benchmark::DoNotOptimize(plq::build_lower_table(f, kEps));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildLowerTable)->RangeMultiplier(10)->Range(40, 40000)
    ->Complexity(benchmark::oN);

void BM_EvalLowerGrid(benchmark::State& state) {
  const auto f = plq::generate_convex_plq(4000, kSeed);
  const auto table = plq::build_lower_table(f, kEps);
  auto xs = query_points(f, static_cast<std::size_t>(state.range(0)));
  std::sort(xs.begin(), xs.end());
  for (auto _ : state) {
    benchmark::DoNotOptimize(table.eval_grid(xs));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvalLowerGrid)->RangeMultiplier(10)->Range(100, 100000)
    ->Complexity();

}  // namespace

BENCHMARK_MAIN();
