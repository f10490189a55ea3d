#include <benchmark/benchmark.h>

#include "bladeinspect/dataset.hpp"
#include "bladeinspect/evaluation.hpp"
#include "bladeinspect/learners.hpp"
#include "bladeinspect/rng.hpp"

using namespace bladeinspect;

namespace {

LabeledDataset blobs(std::size_t per_class, std::size_t width) {
  SplitMix64 rng(5);
  FeatureMatrix m;
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < width; ++j) m.columns.push_back("f" + std::to_string(j));
  for (std::size_t i = 0; i < 3 * per_class; ++i) {
    const auto c = i % 3;
    std::vector<double> row(width);
    for (auto& v : row) v = rng.uniform(-1, 1) + static_cast<double>(c);
    m.ids.push_back("r" + std::to_string(i));
    m.rows.push_back(std::move(row));
    labels.push_back("c" + std::to_string(c));
  }
  m.labels = labels;
  return LabeledDataset(std::move(m));
}

}  // namespace

static void BM_Train(benchmark::State& state) {
  const auto kind = static_cast<LearnerKind>(state.range(0));
  const auto data = blobs(34, 37);
  const LearnerSettings settings;
  for (auto _ : state) benchmark::DoNotOptimize(train_model(kind, data, settings));
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_Train)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

static void BM_CrossValidate(benchmark::State& state) {
  const auto data = blobs(34, 37);
  const auto folds = stratified_kfold(data, 10, 7);
  std::vector<Learner> learners;
  for (auto kind : {LearnerKind::kTree, LearnerKind::kNaiveBayes, LearnerKind::kLogistic, LearnerKind::kMlp})
    learners.push_back(make_learner(kind));
  for (auto _ : state) benchmark::DoNotOptimize(cross_validate(data, learners, folds));
}
BENCHMARK(BM_CrossValidate)->Unit(benchmark::kMillisecond);
