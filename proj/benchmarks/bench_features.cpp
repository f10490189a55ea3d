#include <benchmark/benchmark.h>

#include "bladeinspect/features.hpp"
#include "bladeinspect/raster.hpp"
#include "bladeinspect/rng.hpp"
#include "bladeinspect/synthgen.hpp"

using namespace bladeinspect;

static void BM_GenerateImage(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  SplitMix64 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(generate_image(BladeCondition::kErosion, rng, {side, side}));
}
BENCHMARK(BM_GenerateImage)->Arg(64)->Arg(128)->Arg(256);

static void BM_ExtractFeatures(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  SplitMix64 rng(2);
  const auto img = generate_image(BladeCondition::kCrack, rng, {side, side});
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(img));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side * side));
}
BENCHMARK(BM_ExtractFeatures)->Arg(64)->Arg(128)->Arg(256);

static void BM_PpmRoundTrip(benchmark::State& state) {
  SplitMix64 rng(3);
  const auto img = generate_image(BladeCondition::kHealthy, rng);
  for (auto _ : state) {
    const auto bytes = write_ppm(img);
    benchmark::DoNotOptimize(load_ppm(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size())));
  }
}
BENCHMARK(BM_PpmRoundTrip);
