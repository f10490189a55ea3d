#include <benchmark/benchmark.h>

#include "bladeinspect/clustering.hpp"
#include "bladeinspect/features.hpp"
#include "bladeinspect/rng.hpp"

using namespace bladeinspect;

namespace {

FeatureMatrix random_matrix(std::size_t n, std::size_t width) {
  SplitMix64 rng(11);
  FeatureMatrix m;
  for (std::size_t j = 0; j < width; ++j) m.columns.push_back("f" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    m.ids.push_back("p" + std::to_string(i));
    std::vector<double> row(width);
    for (auto& v : row) v = rng.uniform(-1, 1);
    m.rows.push_back(std::move(row));
  }
  return m;
}

}  // namespace

static void BM_PairwiseDistances(benchmark::State& state) {
  const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), kFeatureCount);
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_distances(m));
}
BENCHMARK(BM_PairwiseDistances)->Arg(100)->Arg(400);

static void BM_Agglomerate(benchmark::State& state) {
  const auto d = pairwise_distances(random_matrix(static_cast<std::size_t>(state.range(0)), 8));
  const auto linkage = static_cast<Linkage>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(agglomerate(d, linkage));
  state.SetLabel(to_string(linkage));
}
BENCHMARK(BM_Agglomerate)->ArgsProduct({{100, 400}, {0, 1, 2, 3}});
