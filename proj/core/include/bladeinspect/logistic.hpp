#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bladeinspect/classifiers.hpp"
#include "bladeinspect/dataset.hpp"

namespace bladeinspect {

struct LogisticConfig {
  double learning_rate = 0.1;
  std::size_t max_iterations = 1000;
  double tolerance = 1e-6;  // on the gradient infinity-norm
  double l2 = 1e-4;         // intercept is never penalized

  void validate() const;
};

/// One-vs-rest logistic regression: one (intercept, coefficients) pair per class.
struct LogisticModel {
  std::vector<std::string> class_names;
  std::size_t feature_count = 0;
  std::vector<double> intercepts;
  std::vector<std::vector<double>> coefficients;

  /// Per-class sigmoid scores renormalized to sum to 1.
  ProbabilityTable predict(std::span<const double> x) const;
};

/// Mean negative log-likelihood of a binary logistic model plus (l2/2)|beta|^2.
/// Parameters are laid out as [intercept, beta_1, ..., beta_n].
class BinaryLogisticLoss {
 public:
  BinaryLogisticLoss(const std::vector<std::vector<double>>& rows, std::vector<double> targets,
                     double l2);

  std::size_t parameter_count() const noexcept { return width_ + 1; }
  double value(std::span<const double> params) const;
  std::vector<double> gradient(std::span<const double> params) const;

 private:
  const std::vector<std::vector<double>>* rows_;
  std::vector<double> targets_;
  double l2_;
  std::size_t width_;
};

/// Full-batch gradient descent from zero for each class against the rest.
/// Throws InvalidArgument for fewer than two classes or nonfinite features.
LogisticModel train_logistic(const LabeledDataset& data, const LogisticConfig& config = {});

inline ProbabilityTable predict_logistic(const LogisticModel& model, std::span<const double> x) {
  return model.predict(x);
}

}  // namespace bladeinspect
