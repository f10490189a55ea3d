#include "bladeinspect/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>

#include "bladeinspect/csv.hpp"
#include "bladeinspect/error.hpp"
#include "bladeinspect/rng.hpp"

namespace bladeinspect {

namespace {

std::vector<std::string> first_appearance_order(const std::vector<std::string>& labels) {
  std::vector<std::string> classes;
  for (const auto& l : labels) {
    if (std::find(classes.begin(), classes.end(), l) == classes.end()) classes.push_back(l);
  }
  return classes;
}

}  // namespace

LabeledDataset::LabeledDataset(FeatureMatrix features) : features_(std::move(features)) {
  if (features_.labels) class_names_ = first_appearance_order(*features_.labels);
  index_labels();
}

LabeledDataset::LabeledDataset(FeatureMatrix features, std::vector<std::string> class_names)
    : features_(std::move(features)), class_names_(std::move(class_names)) {
  index_labels();
}

void LabeledDataset::index_labels() {
  features_.validate();
  if (!features_.labels) throw InvalidArgument("dataset: feature matrix has no labels");
  std::map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < class_names_.size(); ++c) {
    if (!index.emplace(class_names_[c], c).second) {
      throw InvalidArgument("dataset: duplicate class name " + class_names_[c]);
    }
  }
  label_index_.reserve(features_.size());
  for (const auto& l : *features_.labels) {
    if (l.empty()) throw InvalidArgument("dataset: empty label");
    auto it = index.find(l);
    if (it == index.end()) throw InvalidArgument("dataset: label not in class list: " + l);
    label_index_.push_back(it->second);
  }
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(class_names_.size(), 0);
  for (auto l : label_index_) ++counts[l];
  return counts;
}

std::size_t LabeledDataset::present_class_count() const {
  const auto counts = class_counts();
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(),
                                                [](std::size_t c) { return c > 0; }));
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
  FeatureMatrix m;
  m.columns = features_.columns;
  m.labels.emplace();
  for (auto r : rows) {
    m.ids.push_back(features_.ids.at(r));
    m.labels->push_back((*features_.labels)[r]);
    m.rows.push_back(features_.rows[r]);
  }
  return LabeledDataset(std::move(m), class_names_);
}

LabeledDataset load_labeled_csv(std::istream& in) {
  FeatureMatrix m = read_feature_csv(in);
  if (m.size() == 0) throw CsvError(CsvErrorKind::kEmpty, 1, "no rows");
  if (!m.labels) throw CsvError(CsvErrorKind::kEmptyLabel, 2, "no labels present");
  for (std::size_t i = 0; i < m.size(); ++i) {
    // Header is line 1; rows follow without blank lines in our own output.
    if ((*m.labels)[i].empty()) throw CsvError(CsvErrorKind::kEmptyLabel, i + 2, m.ids[i]);
  }
  return LabeledDataset(std::move(m));
}

LabeledDataset load_labeled_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return load_labeled_csv(in);
  } catch (const CsvError& e) {
    throw CsvError(e.kind(), e.line(), path.string());
  }
}

std::vector<std::size_t> FoldAssignment::test_rows(std::size_t f) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] == f) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldAssignment::train_rows(std::size_t f) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] != f) rows.push_back(i);
  }
  return rows;
}

FoldAssignment stratified_kfold(const LabeledDataset& data, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("stratified_kfold: k must be at least 2");
  const auto counts = data.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] < k) {
      throw InvalidArgument("stratified_kfold: k=" + std::to_string(k) + " exceeds the " +
                            std::to_string(counts[c]) + " rows of class " +
                            data.class_names()[c]);
    }
  }

  SplitMix64 rng(seed);
  FoldAssignment out{k, std::vector<std::size_t>(data.size(), 0)};
  std::size_t deal = 0;
  for (std::size_t c = 0; c < data.class_count(); ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.label(i) == c) members.push_back(i);
    }
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng.below(i)]);
    }
    for (auto row : members) out.fold[row] = deal++ % k;
  }
  return out;
}

void write_fold_csv(std::ostream& out, const LabeledDataset& data, const FoldAssignment& folds) {
  out << "id,fold\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << csv::escape(data.id(i)) << ',' << folds.fold.at(i) << '\n';
  }
}

}  // namespace bladeinspect
