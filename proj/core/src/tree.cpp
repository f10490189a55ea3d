#include "bladeinspect/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "bladeinspect/error.hpp"
#include "training_checks.hpp"

namespace bladeinspect {

void TreeConfig::validate() const {
  if (min_leaf < 1) throw InvalidArgument("tree: min leaf must be >= 1");
}

namespace {

__extension__ typedef __int128 Wide;

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  std::size_t left_count = 0;
};

double midpoint(double a, double b) {
  const double mid = a + (b - a) / 2.0;
  return mid < b ? mid : a;
}

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<double>>& rows, SplitCriterion criterion,
              std::size_t class_count, std::span<const std::size_t> labels,
              std::span<const double> targets, const TreeConfig& config)
      : rows_(rows), criterion_(criterion), class_count_(class_count), labels_(labels),
        targets_(targets), config_(config), width_(rows.front().size()) {}

  std::vector<TreeNode> build() {
    std::vector<std::size_t> all(rows_.size());
    std::iota(all.begin(), all.end(), 0);
    grow(std::move(all), 0);
    return std::move(nodes_);
  }

 private:
  std::size_t grow(std::vector<std::size_t> members, std::size_t depth) {
    const std::size_t id = nodes_.size();
    nodes_.push_back(make_leaf(members, depth));

    const bool pure = nodes_[id].impurity == 0.0;
    if (pure || depth >= config_.max_depth || members.size() < 2 * config_.min_leaf) return id;
    const auto split = criterion_ == SplitCriterion::kGini ? best_gini_split(members)
                                                           : best_mse_split(members);
    if (!split) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto i : members) {
      (rows_[i][split->feature] <= split->threshold ? left : right).push_back(i);
    }
    members.clear();
    members.shrink_to_fit();

    nodes_[id].is_leaf = false;
    nodes_[id].feature = split->feature;
    nodes_[id].threshold = split->threshold;
    const std::size_t l = grow(std::move(left), depth + 1);
    const std::size_t r = grow(std::move(right), depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  TreeNode make_leaf(const std::vector<std::size_t>& members, std::size_t depth) const {
    TreeNode node;
    node.depth = depth;
    node.samples = members.size();
    const auto n = static_cast<double>(members.size());
    if (criterion_ == SplitCriterion::kGini) {
      node.class_counts.assign(class_count_, 0);
      for (auto i : members) ++node.class_counts[labels_[i]];
      node.class_probabilities.resize(class_count_);
      for (std::size_t c = 0; c < class_count_; ++c) {
        node.class_probabilities[c] = static_cast<double>(node.class_counts[c]) / n;
      }
      const bool single = std::any_of(node.class_counts.begin(), node.class_counts.end(),
                                      [&](std::size_t c) { return c == members.size(); });
      node.impurity = single ? 0.0 : gini_impurity(node.class_probabilities);
    } else {
      std::vector<double> ys;
      ys.reserve(members.size());
      for (auto i : members) ys.push_back(targets_[i]);
      double sum = 0.0;
      for (double y : ys) sum += y;
      node.mean_target = sum / n;
      const bool constant =
          std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); });
      node.impurity = constant ? 0.0 : mse_impurity(ys);
    }
    return node;
  }

  std::vector<std::size_t> sorted_by(const std::vector<std::size_t>& members, std::size_t f) const {
    std::vector<std::size_t> order = members;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rows_[a][f] < rows_[b][f]; });
    return order;
  }

  // Maximizing the Gini decrease equals maximizing S_L/n_L + S_R/n_R, where
  // S is the sum of squared class counts. The fraction is compared exactly.
  std::optional<Split> best_gini_split(const std::vector<std::size_t>& members) const {
    const std::size_t n = members.size();
    std::vector<std::size_t> parent(class_count_, 0);
    for (auto i : members) ++parent[labels_[i]];
    Wide parent_sq = 0;
    for (auto c : parent) parent_sq += static_cast<Wide>(c) * c;

    std::optional<Split> best;
    Wide best_num = 0;
    Wide best_den = 1;
    for (std::size_t f = 0; f < width_; ++f) {
      const auto order = sorted_by(members, f);
      std::vector<std::size_t> left(class_count_, 0);
      std::vector<std::size_t> right = parent;
      Wide left_sq = 0;
      Wide right_sq = parent_sq;
      for (std::size_t pos = 0; pos + 1 < n; ++pos) {
        const std::size_t c = labels_[order[pos]];
        left_sq += 2 * static_cast<Wide>(left[c]) + 1;
        right_sq -= 2 * static_cast<Wide>(right[c]) - 1;
        ++left[c];
        --right[c];
        const double a = rows_[order[pos]][f];
        const double b = rows_[order[pos + 1]][f];
        if (!(a < b)) continue;
        const std::size_t nl = pos + 1;
        const std::size_t nr = n - nl;
        if (nl < config_.min_leaf || nr < config_.min_leaf) continue;
        const Wide num = left_sq * static_cast<Wide>(nr) + right_sq * static_cast<Wide>(nl);
        const Wide den = static_cast<Wide>(nl) * static_cast<Wide>(nr);
        if (!best || num * best_den > best_num * den) {
          best = Split{f, midpoint(a, b), nl};
          best_num = num;
          best_den = den;
        }
      }
    }
    // Require a strictly positive decrease: num/den > S_parent/n.
    if (best && best_num * static_cast<Wide>(n) > parent_sq * best_den) return best;
    return std::nullopt;
  }

  std::optional<Split> best_mse_split(const std::vector<std::size_t>& members) const {
    const std::size_t n = members.size();
    double total = 0.0;
    double total_sq = 0.0;
    for (auto i : members) {
      total += targets_[i];
      total_sq += targets_[i] * targets_[i];
    }
    const double parent_ss = total_sq - total * total / static_cast<double>(n);

    std::optional<Split> best;
    double best_ss = 0.0;
    for (std::size_t f = 0; f < width_; ++f) {
      const auto order = sorted_by(members, f);
      double left_sum = 0.0;
      double left_sq = 0.0;
      for (std::size_t pos = 0; pos + 1 < n; ++pos) {
        const double y = targets_[order[pos]];
        left_sum += y;
        left_sq += y * y;
        const double a = rows_[order[pos]][f];
        const double b = rows_[order[pos + 1]][f];
        if (!(a < b)) continue;
        const std::size_t nl = pos + 1;
        const std::size_t nr = n - nl;
        if (nl < config_.min_leaf || nr < config_.min_leaf) continue;
        const double right_sum = total - left_sum;
        const double right_sq = total_sq - left_sq;
        const double ss = (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
                          (right_sq - right_sum * right_sum / static_cast<double>(nr));
        if (!best || ss < best_ss) {
          best = Split{f, midpoint(a, b), nl};
          best_ss = ss;
        }
      }
    }
    if (best && best_ss < parent_ss) return best;
    return std::nullopt;
  }

  const std::vector<std::vector<double>>& rows_;
  SplitCriterion criterion_;
  std::size_t class_count_;
  std::span<const std::size_t> labels_;
  std::span<const double> targets_;
  const TreeConfig& config_;
  std::size_t width_;
  std::vector<TreeNode> nodes_;
};

void require_finite(const std::vector<std::vector<double>>& rows) {
  for (const auto& r : rows) {
    for (double v : r) {
      if (!std::isfinite(v)) throw InvalidArgument("train_tree: nonfinite feature");
    }
  }
}

}  // namespace

TreeModel train_tree(const LabeledDataset& data, const TreeConfig& config) {
  config.validate();
  if (data.size() == 0) throw InvalidArgument("train_tree: empty dataset");
  if (data.class_count() < 2) throw InvalidArgument("train_tree: need at least two classes");
  require_finite(data.features().rows);
  TreeModel model;
  model.criterion = SplitCriterion::kGini;
  model.class_names = data.class_names();
  model.feature_count = data.width();
  TreeBuilder builder(data.features().rows, SplitCriterion::kGini, data.class_count(),
                      data.label_indices(), {}, config);
  model.nodes = builder.build();
  return model;
}

TreeModel train_regression_tree(const std::vector<std::vector<double>>& rows,
                                std::span<const double> targets, const TreeConfig& config) {
  config.validate();
  if (rows.empty()) throw InvalidArgument("train_regression_tree: no samples");
  if (rows.size() != targets.size()) throw InvalidArgument("train_regression_tree: length mismatch");
  require_finite(rows);
  for (double y : targets) {
    if (!std::isfinite(y)) throw InvalidArgument("train_regression_tree: nonfinite target");
  }
  TreeModel model;
  model.criterion = SplitCriterion::kMse;
  model.feature_count = rows.front().size();
  TreeBuilder builder(rows, SplitCriterion::kMse, 0, {}, targets, config);
  model.nodes = builder.build();
  return model;
}

const TreeNode& TreeModel::leaf_for(std::span<const double> x) const {
  detail::require_width(x, feature_count, "predict_tree");
  std::size_t at = 0;
  while (!nodes[at].is_leaf) {
    at = x[nodes[at].feature] <= nodes[at].threshold ? nodes[at].left : nodes[at].right;
  }
  return nodes[at];
}

ProbabilityTable TreeModel::predict(std::span<const double> x) const {
  if (criterion != SplitCriterion::kGini) throw InvalidArgument("predict_tree: regression tree");
  return leaf_for(x).class_probabilities;
}

double TreeModel::predict_value(std::span<const double> x) const {
  if (criterion != SplitCriterion::kMse) throw InvalidArgument("predict_tree: classification tree");
  return leaf_for(x).mean_target;
}

std::size_t TreeModel::depth() const {
  std::size_t d = 0;
  for (const auto& node : nodes) d = std::max(d, node.depth);
  return d;
}

}  // namespace bladeinspect
