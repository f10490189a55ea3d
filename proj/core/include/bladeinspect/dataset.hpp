#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bladeinspect/features.hpp"

namespace bladeinspect {

/// Labeled feature table. Class order is first-appearance order in the source
/// and stays fixed for every derived subset, model and report.
class LabeledDataset {
 public:
  /// Throws InvalidArgument when labels are missing or any label is empty.
  explicit LabeledDataset(FeatureMatrix features);
  /// Builds a dataset with an explicit class order (used for subsets).
  LabeledDataset(FeatureMatrix features, std::vector<std::string> class_names);

  const FeatureMatrix& features() const noexcept { return features_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  std::size_t class_count() const noexcept { return class_names_.size(); }
  std::size_t size() const noexcept { return label_index_.size(); }
  std::size_t width() const noexcept { return features_.width(); }

  const std::vector<double>& row(std::size_t i) const { return features_.rows[i]; }
  const std::string& id(std::size_t i) const { return features_.ids[i]; }
  /// Index into class_names() of row i.
  std::size_t label(std::size_t i) const { return label_index_[i]; }
  const std::vector<std::size_t>& label_indices() const noexcept { return label_index_; }

  /// Rows present per class, indexed like class_names().
  std::vector<std::size_t> class_counts() const;
  /// Number of classes with at least one row.
  std::size_t present_class_count() const;

  /// Rows in the given order; keeps the full class list.
  LabeledDataset subset(std::span<const std::size_t> rows) const;

 private:
  void index_labels();

  FeatureMatrix features_;
  std::vector<std::string> class_names_;
  std::vector<std::size_t> label_index_;
};

/// Reads a features CSV whose label cells are all nonempty. Throws CsvError
/// (kEmptyLabel, kMissingId, kDuplicateId, kWrongColumnCount, ...).
LabeledDataset load_labeled_csv(std::istream& in);
LabeledDataset load_labeled_csv(const std::filesystem::path& path);

struct FoldAssignment {
  std::size_t k = 0;
  std::vector<std::size_t> fold;  // fold index per row

  std::vector<std::size_t> test_rows(std::size_t f) const;
  std::vector<std::size_t> train_rows(std::size_t f) const;
};

inline constexpr std::size_t kDefaultFolds = 10;

/// Stratified k-fold split. Within each class (in class order) the row indices
/// are Fisher-Yates shuffled from one SplitMix64 stream seeded with `seed`,
/// then dealt round-robin; the dealing position carries over from one class to
/// the next so fold sizes stay balanced. Requires 2 <= k <= smallest class.
FoldAssignment stratified_kfold(const LabeledDataset& data, std::size_t k, std::uint64_t seed);

/// `id,fold` rows in dataset order.
void write_fold_csv(std::ostream& out, const LabeledDataset& data, const FoldAssignment& folds);

}  // namespace bladeinspect
