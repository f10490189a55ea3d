#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bladeinspect {

/// One probability per class, in dataset class order; sums to 1.
using ProbabilityTable = std::vector<double>;

/// Probabilities are clipped to [kProbabilityClip, 1 - kProbabilityClip] before logs.
inline constexpr double kProbabilityClip = 1e-15;

/// Logistic function, evaluated through exp(-|z|) so it never overflows.
double sigmoid(double z) noexcept;

/// log(p / (1 - p)). Throws InvalidArgument unless 0 < p < 1.
double logit(double p);

/// -log(clip(predicted[actual])). Throws InvalidArgument for an unknown class.
double cross_entropy_loss(std::span<const double> predicted, std::size_t actual);

/// 1 - sum p_k^2 over a class-proportion table.
double gini_impurity(std::span<const double> proportions);

/// Mean squared deviation from the mean. Throws InvalidArgument when empty.
double mse_impurity(std::span<const double> targets);

/// theta - eta * gradient, elementwise.
std::vector<double> sgd_update(std::span<const double> theta, std::span<const double> gradient,
                               double learning_rate);
/// In-place form used by the training loops.
void sgd_step(std::span<double> theta, std::span<const double> gradient, double learning_rate);

/// Index of the largest probability; ties go to the earliest class.
std::size_t argmax(std::span<const double> probabilities);

}  // namespace bladeinspect
