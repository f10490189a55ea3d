#include "bladeinspect/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "bladeinspect/error.hpp"
#include "training_checks.hpp"

namespace bladeinspect {

void LogisticConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidArgument("logistic: learning rate must be positive");
  if (max_iterations < 1) throw InvalidArgument("logistic: iteration limit must be >= 1");
  if (!(l2 >= 0.0)) throw InvalidArgument("logistic: l2 must be nonnegative");
  if (!(tolerance >= 0.0)) throw InvalidArgument("logistic: tolerance must be nonnegative");
}

BinaryLogisticLoss::BinaryLogisticLoss(const std::vector<std::vector<double>>& rows,
                                       std::vector<double> targets, double l2)
    : rows_(&rows), targets_(std::move(targets)), l2_(l2),
      width_(rows.empty() ? 0 : rows.front().size()) {
  if (rows.size() != targets_.size()) throw InvalidArgument("logistic loss: rows/targets mismatch");
  if (rows.empty()) throw InvalidArgument("logistic loss: no rows");
}

namespace {

double linear(std::span<const double> params, const std::vector<double>& x) {
  double z = params[0];
  for (std::size_t j = 0; j < x.size(); ++j) z += params[j + 1] * x[j];
  return z;
}

// log(1 + e^z), stable for large |z|.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

double BinaryLogisticLoss::value(std::span<const double> params) const {
  if (params.size() != parameter_count()) throw InvalidArgument("logistic loss: parameter count");
  double nll = 0.0;
  for (std::size_t i = 0; i < rows_->size(); ++i) {
    const double z = linear(params, (*rows_)[i]);
    // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
    nll += softplus(z) - targets_[i] * z;
  }
  double penalty = 0.0;
  for (std::size_t j = 1; j < params.size(); ++j) penalty += params[j] * params[j];
  return nll / static_cast<double>(rows_->size()) + 0.5 * l2_ * penalty;
}

std::vector<double> BinaryLogisticLoss::gradient(std::span<const double> params) const {
  if (params.size() != parameter_count()) throw InvalidArgument("logistic loss: parameter count");
  std::vector<double> grad(params.size(), 0.0);
  for (std::size_t i = 0; i < rows_->size(); ++i) {
    const auto& x = (*rows_)[i];
    const double residual = sigmoid(linear(params, x)) - targets_[i];
    grad[0] += residual;
    for (std::size_t j = 0; j < x.size(); ++j) grad[j + 1] += residual * x[j];
  }
  const double n = static_cast<double>(rows_->size());
  grad[0] /= n;
  for (std::size_t j = 1; j < grad.size(); ++j) grad[j] = grad[j] / n + l2_ * params[j];
  return grad;
}

LogisticModel train_logistic(const LabeledDataset& data, const LogisticConfig& config) {
  config.validate();
  detail::require_trainable(data, "train_logistic");

  LogisticModel model;
  model.class_names = data.class_names();
  model.feature_count = data.width();
  const auto& rows = data.features().rows;

  for (std::size_t c = 0; c < data.class_count(); ++c) {
    std::vector<double> targets(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) targets[i] = data.label(i) == c ? 1.0 : 0.0;
    const BinaryLogisticLoss loss(rows, std::move(targets), config.l2);

    std::vector<double> params(loss.parameter_count(), 0.0);
    for (std::size_t it = 0; it < config.max_iterations; ++it) {
      const auto grad = loss.gradient(params);
      double norm = 0.0;
      for (double g : grad) norm = std::max(norm, std::abs(g));
      if (norm < config.tolerance) break;
      sgd_step(params, grad, config.learning_rate);
    }
    model.intercepts.push_back(params[0]);
    model.coefficients.emplace_back(params.begin() + 1, params.end());
  }
  return model;
}

ProbabilityTable LogisticModel::predict(std::span<const double> x) const {
  detail::require_width(x, feature_count, "predict_logistic");
  ProbabilityTable p(class_names.size());
  double total = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    double z = intercepts[c];
    for (std::size_t j = 0; j < x.size(); ++j) z += coefficients[c][j] * x[j];
    p[c] = sigmoid(z);
    total += p[c];
  }
  // Every score is positive unless all underflow; fall back to uniform then.
  if (!(total > 0.0)) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
    return p;
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace bladeinspect
