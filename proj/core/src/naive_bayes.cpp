#include "bladeinspect/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bladeinspect/error.hpp"
#include "training_checks.hpp"

namespace bladeinspect {

NaiveBayesModel train_naive_bayes(const LabeledDataset& data) {
  detail::require_trainable(data, "train_naive_bayes");
  const auto counts = data.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw InvalidArgument("train_naive_bayes: class " + data.class_names()[c] + " has no rows");
    }
  }

  const std::size_t classes = data.class_count();
  const std::size_t width = data.width();
  const auto n = static_cast<double>(data.size());

  NaiveBayesModel model;
  model.class_names = data.class_names();
  model.means.assign(classes, std::vector<double>(width, 0.0));
  model.variances.assign(classes, std::vector<double>(width, 0.0));
  for (std::size_t c = 0; c < classes; ++c) {
    model.priors.push_back(static_cast<double>(counts[c]) / n);
  }

  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& x = data.row(i);
    auto& mean = model.means[data.label(i)];
    for (std::size_t j = 0; j < width; ++j) mean[j] += x[j];
  }
  for (std::size_t c = 0; c < classes; ++c) {
    for (double& m : model.means[c]) m /= static_cast<double>(counts[c]);
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& x = data.row(i);
    const std::size_t c = data.label(i);
    for (std::size_t j = 0; j < width; ++j) {
      const double d = x[j] - model.means[c][j];
      model.variances[c][j] += d * d;
    }
  }

  // Floor relative to the widest feature spread of the whole training set.
  double reference = 0.0;
  for (std::size_t j = 0; j < width; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) sum += data.row(i)[j];
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      ss += (data.row(i)[j] - mean) * (data.row(i)[j] - mean);
    }
    reference = std::max(reference, ss / n);
  }
  model.variance_floor = kVarianceFloorScale * std::max(reference, kMinReferenceVariance);

  for (std::size_t c = 0; c < classes; ++c) {
    for (double& v : model.variances[c]) {
      v = std::max(v / static_cast<double>(counts[c]), model.variance_floor);
    }
  }
  return model;
}

ProbabilityTable NaiveBayesModel::predict(std::span<const double> x) const {
  detail::require_width(x, means.empty() ? 0 : means.front().size(), "predict_naive_bayes");
  const std::size_t classes = priors.size();
  std::vector<double> log_post(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    double lp = std::log(priors[c]);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = x[j] - means[c][j];
      lp -= 0.5 * (std::log(2.0 * std::numbers::pi * variances[c][j]) + d * d / variances[c][j]);
    }
    log_post[c] = lp;
  }
  const double top = *std::max_element(log_post.begin(), log_post.end());
  ProbabilityTable p(classes);
  double total = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    p[c] = std::exp(log_post[c] - top);
    total += p[c];
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace bladeinspect
