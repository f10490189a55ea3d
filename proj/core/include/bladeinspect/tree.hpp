#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bladeinspect/classifiers.hpp"
#include "bladeinspect/dataset.hpp"

namespace bladeinspect {

enum class SplitCriterion { kGini, kMse };

struct TreeConfig {
  std::size_t max_depth = 10;
  std::size_t min_leaf = 2;

  void validate() const;
};

struct TreeNode {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  bool is_leaf = true;
  std::size_t feature = kNone;
  double threshold = 0.0;  // x[feature] <= threshold goes left
  std::size_t left = kNone;
  std::size_t right = kNone;
  std::size_t depth = 0;
  std::size_t samples = 0;
  std::vector<std::size_t> class_counts;       // classification only
  std::vector<double> class_probabilities;     // classification only
  double mean_target = 0.0;                    // regression only
  double impurity = 0.0;
};

/// CART tree. Nodes are stored in preorder; nodes[0] is the root.
struct TreeModel {
  SplitCriterion criterion = SplitCriterion::kGini;
  std::vector<std::string> class_names;  // empty in regression mode
  std::size_t feature_count = 0;
  std::vector<TreeNode> nodes;

  const TreeNode& leaf_for(std::span<const double> x) const;
  ProbabilityTable predict(std::span<const double> x) const;
  double predict_value(std::span<const double> x) const;
  std::size_t depth() const;
};

/// Greedy Gini tree. Candidate thresholds are midpoints of consecutive
/// distinct values; ties go to the lowest feature, then the lowest threshold.
TreeModel train_tree(const LabeledDataset& data, const TreeConfig& config = {});

/// Same recursion with the MSE criterion on real targets.
TreeModel train_regression_tree(const std::vector<std::vector<double>>& rows,
                                std::span<const double> targets, const TreeConfig& config = {});

inline ProbabilityTable predict_tree(const TreeModel& model, std::span<const double> x) {
  return model.predict(x);
}

}  // namespace bladeinspect
