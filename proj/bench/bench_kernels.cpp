// Serial reference against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "aiso/distsys.hpp"
#include "aiso/formula.hpp"
#include "aiso/kernels.hpp"
#include "aiso/scenarios.hpp"

using namespace aiso;

namespace {

kern::Exec mode(const benchmark::State& st) { return st.range(1) ? kern::Exec::Parallel : kern::Exec::Serial; }

MetricStructure cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_cloud(rng, n);
}

// A ternary quantified formula: the table has n^3 entries, each an n-way sup.
void BM_Tabulate(benchmark::State& st) {
  const auto m = cloud(st.range(0), 1);
  const auto f = parse("(sup x3:S (min (max (d S x0 x3) (d S x1 x3)) (pred Q x2 x3)))", m.signature());
  for (auto _ : st) benchmark::DoNotOptimize(kern::tabulate(f, m, mode(st)).values.data());
}

void BM_Distortion(benchmark::State& st) {
  const auto m = cloud(st.range(0), 2), n = cloud(st.range(0), 3);
  const auto sys = builtin("fghk", m.signature());
  std::vector<kern::Table> tl, tr;
  for (const auto& g : sys.generators) {
    tl.push_back(kern::tabulate(g, m));
    tr.push_back(kern::tabulate(g, n));
  }
  kern::PairList all;
  for (std::size_t i = 0; i < m.sorts[0].size(); ++i)
    for (std::size_t j = 0; j < n.sorts[0].size(); ++j) all.emplace_back(i, j);
  const std::vector<kern::PairList> pairs{all};
  for (auto _ : st) benchmark::DoNotOptimize(kern::distortion(tl, tr, pairs, mode(st)).value);
}

void BM_ParallelFor(benchmark::State& st) {
  const std::size_t n = st.range(0);
  std::vector<double> out(n);
  for (auto _ : st) {
    kern::parallel_for(n, [&](std::size_t i) { out[i] = std::sin(0.001 * i) * std::cos(0.002 * i); }, mode(st));
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_Tabulate)->ArgsProduct({{8, 16, 24}, {0, 1}})->ArgNames({"n", "parallel"});
BENCHMARK(BM_Distortion)->ArgsProduct({{6, 12}, {0, 1}})->ArgNames({"n", "parallel"});
BENCHMARK(BM_ParallelFor)->ArgsProduct({{1 << 12, 1 << 18}, {0, 1}})->ArgNames({"n", "parallel"});

BENCHMARK_MAIN();
