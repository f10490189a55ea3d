#pragma once

#include <string_view>

#include "bladeinspect/evaluation.hpp"
#include "bladeinspect/logistic.hpp"
#include "bladeinspect/mlp.hpp"
#include "bladeinspect/model_io.hpp"
#include "bladeinspect/tree.hpp"

namespace bladeinspect {

enum class LearnerKind { kTree, kNaiveBayes, kLogistic, kMlp };

/// CLI keys: tree, nb, logreg, mlp.
const char* to_string(LearnerKind kind);
LearnerKind parse_learner_kind(std::string_view key);

struct LearnerSettings {
  TreeConfig tree;
  LogisticConfig logistic;
  MlpConfig mlp;
  /// Z-score features on each training split before fitting; the held-out
  /// rows reuse the training split's parameters.
  bool standardize = true;
};

TrainedModel train_model(LearnerKind kind, const LabeledDataset& data,
                         const LearnerSettings& settings);

Learner make_learner(LearnerKind kind, const LearnerSettings& settings = {});

}  // namespace bladeinspect
