#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bladeinspect/classifiers.hpp"
#include "bladeinspect/dataset.hpp"

namespace bladeinspect {

struct ConfusionMatrix {
  std::vector<std::string> class_names;
  std::vector<std::vector<std::size_t>> counts;  // [actual][predicted]

  std::size_t total() const;
  /// Row-normalized counts; empty rows stay all zero.
  std::vector<std::vector<double>> proportions() const;
};

/// Throws InvalidArgument on a length mismatch or a label outside `classes`.
ConfusionMatrix confusion_matrix(std::span<const std::string> actual,
                                 std::span<const std::string> predicted,
                                 const std::vector<std::string>& classes);
ConfusionMatrix confusion_matrix(std::span<const std::size_t> actual,
                                 std::span<const std::size_t> predicted,
                                 const std::vector<std::string>& classes);

struct ClassificationMetrics {
  double ca = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double specificity = 0.0;
  double mcc = 0.0;
};

/// Accuracy, support-weighted one-vs-rest precision/recall/F1/specificity and
/// the multiclass (R_K) Matthews correlation. Zero denominators yield 0.
ClassificationMetrics classification_metrics(const ConfusionMatrix& cm);

/// Mann-Whitney AUC of one score column: (concordant + ties/2) / (P * N).
/// Returns nullopt when either side is empty.
std::optional<double> binary_auc(std::span<const double> scores, const std::vector<bool>& positive);

/// Support-weighted one-vs-rest AUC over classes that have both positives and
/// negatives. Throws InvalidArgument when no class qualifies.
double auc(std::span<const ProbabilityTable> scores, std::span<const std::size_t> actual,
           std::size_t class_count);

double mean_log_loss(std::span<const ProbabilityTable> scores, std::span<const std::size_t> actual);

struct RegressionErrors {
  double sse = 0.0;
  double sst = 0.0;
  std::optional<double> r2;  // nullopt when SST == 0
};

RegressionErrors regression_errors(std::span<const double> actual, std::span<const double> predicted);

enum class Metric { kAuc, kCa, kF1, kPrecision, kRecall, kSpecificity, kMcc, kLogLoss };

inline constexpr std::array<Metric, 8> kAllMetrics = {
    Metric::kAuc,    Metric::kCa,          Metric::kF1,  Metric::kPrecision,
    Metric::kRecall, Metric::kSpecificity, Metric::kMcc, Metric::kLogLoss};
/// Column order of the headline report table.
inline constexpr std::array<Metric, 6> kReportMetrics = {
    Metric::kAuc, Metric::kCa, Metric::kF1, Metric::kPrecision, Metric::kRecall, Metric::kMcc};
/// Metrics that get a pairwise model-comparison table.
inline constexpr std::array<Metric, 7> kComparisonMetrics = {
    Metric::kAuc,    Metric::kCa,          Metric::kF1,     Metric::kPrecision,
    Metric::kRecall, Metric::kSpecificity, Metric::kLogLoss};

/// Machine name (`auc`, `log_loss`, ...).
const char* to_string(Metric metric);
/// Table heading (`AUC`, `Logistic loss`, ...).
const char* display_name(Metric metric);
Metric parse_metric(std::string_view name);

struct MetricSuite {
  double auc = 0.0;
  double ca = 0.0;
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double specificity = 0.0;
  double mcc = 0.0;
  double log_loss = 0.0;

  double get(Metric metric) const;
};

/// Scores a set of probability tables: argmax predictions (ties by class
/// order) feed the confusion-matrix metrics, the tables feed AUC and log loss.
MetricSuite score_predictions(std::span<const ProbabilityTable> scores,
                              std::span<const std::size_t> actual,
                              const std::vector<std::string>& classes);

struct FoldScores {
  std::string model;
  Metric metric = Metric::kAuc;
  std::vector<double> values;  // one per fold
};

using Predictor = std::function<ProbabilityTable(std::span<const double>)>;

/// A named training procedure; `fit` returns a predictor for one training split.
struct Learner {
  std::string name;
  std::function<Predictor(const LabeledDataset&)> fit;
};

struct ModelEvaluation {
  std::string name;
  MetricSuite pooled;
  ConfusionMatrix confusion;
  std::vector<ProbabilityTable> probabilities;  // out-of-fold, per row
  std::vector<std::size_t> predicted;           // argmax per row
  std::vector<FoldScores> fold_scores;          // one per metric, kAllMetrics order

  const FoldScores& scores(Metric metric) const;
};

struct EvaluationReport {
  std::vector<std::string> class_names;
  FoldAssignment folds;
  std::vector<ModelEvaluation> models;
};

/// Trains every learner on each fold's complement and predicts the fold.
/// Throws ProtocolError naming the fold and class when a training split lacks a class.
/// A fold whose test rows hold a single class gets a per-fold AUC of 0.5.
EvaluationReport cross_validate(const LabeledDataset& data, const std::vector<Learner>& learners,
                                const FoldAssignment& folds);

struct ComparisonMatrix {
  Metric metric = Metric::kAuc;
  std::vector<std::string> models;
  std::vector<std::vector<std::optional<double>>> entries;  // diagonal empty
};

/// entry(A, B) = (folds where A scores higher + ties / 2) / k.
/// Throws InvalidArgument on mixed metrics or fold counts.
ComparisonMatrix compare_models(std::span<const FoldScores> scores);
ComparisonMatrix compare_models(const EvaluationReport& report, Metric metric);

/// model,auc,ca,f1,precision,recall,mcc,specificity,log_loss
void write_report_csv(std::ostream& out, const EvaluationReport& report);
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm);
void write_predictions_csv(std::ostream& out, const LabeledDataset& data,
                           const EvaluationReport& report, const ModelEvaluation& model);
void write_fold_scores_csv(std::ostream& out, const EvaluationReport& report);
void write_comparison_csv(std::ostream& out, const ComparisonMatrix& matrix);

}  // namespace bladeinspect
