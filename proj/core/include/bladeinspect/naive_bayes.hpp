#pragma once

#include <span>
#include <string>
#include <vector>

#include "bladeinspect/classifiers.hpp"
#include "bladeinspect/dataset.hpp"

namespace bladeinspect {

inline constexpr double kVarianceFloorScale = 1e-9;
inline constexpr double kMinReferenceVariance = 1e-12;

/// Gaussian naive Bayes with per-class, per-feature mean and variance.
struct NaiveBayesModel {
  std::vector<std::string> class_names;
  std::vector<double> priors;
  std::vector<std::vector<double>> means;      // [class][feature]
  std::vector<std::vector<double>> variances;  // [class][feature], >= variance_floor
  double variance_floor = 0.0;

  /// Posterior computed in log space, normalized by log-sum-exp.
  ProbabilityTable predict(std::span<const double> x) const;
};

/// Throws InvalidArgument when fewer than two classes or any class is empty.
NaiveBayesModel train_naive_bayes(const LabeledDataset& data);

inline ProbabilityTable predict_naive_bayes(const NaiveBayesModel& model,
                                            std::span<const double> x) {
  return model.predict(x);
}

}  // namespace bladeinspect
