#include "bladeinspect/learners.hpp"

#include <memory>
#include <string>

#include "bladeinspect/error.hpp"
#include "bladeinspect/naive_bayes.hpp"

namespace bladeinspect {

const char* to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kTree: return "tree";
    case LearnerKind::kNaiveBayes: return "nb";
    case LearnerKind::kLogistic: return "logreg";
    case LearnerKind::kMlp: return "mlp";
  }
  return "unknown";
}

LearnerKind parse_learner_kind(std::string_view key) {
  if (key == "tree") return LearnerKind::kTree;
  if (key == "nb") return LearnerKind::kNaiveBayes;
  if (key == "logreg") return LearnerKind::kLogistic;
  if (key == "mlp") return LearnerKind::kMlp;
  throw InvalidArgument("unknown model: " + std::string(key) + " (expected tree, nb, logreg, mlp)");
}

TrainedModel train_model(LearnerKind kind, const LabeledDataset& data,
                         const LearnerSettings& settings) {
  switch (kind) {
    case LearnerKind::kTree: return train_tree(data, settings.tree);
    case LearnerKind::kNaiveBayes: return train_naive_bayes(data);
    case LearnerKind::kLogistic: return train_logistic(data, settings.logistic);
    case LearnerKind::kMlp: return train_mlp(data, settings.mlp);
  }
  throw InvalidArgument("unknown learner kind");
}

Learner make_learner(LearnerKind kind, const LearnerSettings& settings) {
  Learner learner;
  learner.name = to_string(kind);
  learner.fit = [kind, settings](const LabeledDataset& train) -> Predictor {
    if (!settings.standardize) {
      auto model = std::make_shared<const TrainedModel>(train_model(kind, train, settings));
      return [model](std::span<const double> x) { return predict(*model, x); };
    }
    auto params = std::make_shared<const NormalizationParams>(
        fit_normalization(train.features().rows));
    FeatureMatrix scaled = train.features();
    for (auto& row : scaled.rows) row = params->apply(row);
    const LabeledDataset scaled_train(std::move(scaled), train.class_names());
    auto model = std::make_shared<const TrainedModel>(train_model(kind, scaled_train, settings));
    return [model, params](std::span<const double> x) {
      return predict(*model, params->apply(std::vector<double>(x.begin(), x.end())));
    };
  };
  return learner;
}

}  // namespace bladeinspect
