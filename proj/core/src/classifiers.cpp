#include "bladeinspect/classifiers.hpp"

#include <algorithm>
#include <cmath>

#include "bladeinspect/error.hpp"

namespace bladeinspect {

double sigmoid(double z) noexcept {
  const double e = std::exp(-std::abs(z));
  return z >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
}

double logit(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("logit: p must lie strictly inside (0, 1)");
  return std::log(p / (1.0 - p));
}

double cross_entropy_loss(std::span<const double> predicted, std::size_t actual) {
  if (actual >= predicted.size()) throw InvalidArgument("cross_entropy_loss: unknown class");
  const double p = std::clamp(predicted[actual], kProbabilityClip, 1.0 - kProbabilityClip);
  return -std::log(p);
}

double gini_impurity(std::span<const double> proportions) {
  double total = 0.0;
  double squares = 0.0;
  for (double p : proportions) {
    if (!(p >= 0.0)) throw InvalidArgument("gini_impurity: negative proportion");
    total += p;
    squares += p * p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("gini_impurity: proportions must sum to 1");
  return 1.0 - squares;
}

double mse_impurity(std::span<const double> targets) {
  if (targets.empty()) throw InvalidArgument("mse_impurity: empty targets");
  double sum = 0.0;
  for (double y : targets) sum += y;
  const double mean = sum / static_cast<double>(targets.size());
  double ss = 0.0;
  for (double y : targets) ss += (y - mean) * (y - mean);
  return ss / static_cast<double>(targets.size());
}

void sgd_step(std::span<double> theta, std::span<const double> gradient, double learning_rate) {
  if (theta.size() != gradient.size()) throw InvalidArgument("sgd: shape mismatch");
  if (!(learning_rate > 0.0)) throw InvalidArgument("sgd: learning rate must be positive");
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= learning_rate * gradient[i];
}

std::vector<double> sgd_update(std::span<const double> theta, std::span<const double> gradient,
                               double learning_rate) {
  std::vector<double> out(theta.begin(), theta.end());
  sgd_step(out, gradient, learning_rate);
  return out;
}

std::size_t argmax(std::span<const double> probabilities) {
  return static_cast<std::size_t>(std::max_element(probabilities.begin(), probabilities.end()) -
                                  probabilities.begin());
}

}  // namespace bladeinspect
