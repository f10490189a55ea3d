#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "bladeinspect/logistic.hpp"
#include "bladeinspect/mlp.hpp"
#include "bladeinspect/naive_bayes.hpp"
#include "bladeinspect/tree.hpp"

namespace bladeinspect {

using TrainedModel = std::variant<LogisticModel, TreeModel, NaiveBayesModel, MlpModel>;

ProbabilityTable predict(const TrainedModel& model, std::span<const double> x);

/// Self-describing JSON document tagged with "kind". Reals round-trip exactly,
/// so a reloaded model predicts bit-identically.
std::string model_to_json(const TrainedModel& model);
/// Throws Error on malformed documents or unknown kinds.
TrainedModel model_from_json(std::string_view text);

}  // namespace bladeinspect
