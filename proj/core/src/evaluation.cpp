#include "bladeinspect/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>

#include "bladeinspect/csv.hpp"
#include "bladeinspect/error.hpp"

namespace bladeinspect {

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) n = std::accumulate(row.begin(), row.end(), n);
  return n;
}

std::vector<std::vector<double>> ConfusionMatrix::proportions() const {
  std::vector<std::vector<double>> out;
  for (const auto& row : counts) {
    const std::size_t sum = std::accumulate(row.begin(), row.end(), std::size_t{0});
    std::vector<double> p(row.size(), 0.0);
    if (sum > 0) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        p[j] = static_cast<double>(row[j]) / static_cast<double>(sum);
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

ConfusionMatrix confusion_matrix(std::span<const std::size_t> actual,
                                 std::span<const std::size_t> predicted,
                                 const std::vector<std::string>& classes) {
  if (actual.size() != predicted.size()) throw InvalidArgument("confusion_matrix: length mismatch");
  ConfusionMatrix cm;
  cm.class_names = classes;
  cm.counts.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] >= classes.size() || predicted[i] >= classes.size()) {
      throw InvalidArgument("confusion_matrix: unknown label index");
    }
    ++cm.counts[actual[i]][predicted[i]];
  }
  return cm;
}

ConfusionMatrix confusion_matrix(std::span<const std::string> actual,
                                 std::span<const std::string> predicted,
                                 const std::vector<std::string>& classes) {
  if (actual.size() != predicted.size()) throw InvalidArgument("confusion_matrix: length mismatch");
  std::map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < classes.size(); ++c) index.emplace(classes[c], c);
  const auto lookup = [&](const std::string& label) {
    auto it = index.find(label);
    if (it == index.end()) throw InvalidArgument("confusion_matrix: unknown label " + label);
    return it->second;
  };
  std::vector<std::size_t> a;
  std::vector<std::size_t> p;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    a.push_back(lookup(actual[i]));
    p.push_back(lookup(predicted[i]));
  }
  return confusion_matrix(std::span<const std::size_t>(a), std::span<const std::size_t>(p), classes);
}

namespace {

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

ClassificationMetrics classification_metrics(const ConfusionMatrix& cm) {
  const std::size_t k = cm.counts.size();
  const std::size_t n = cm.total();
  if (n == 0) throw InvalidArgument("classification_metrics: empty confusion matrix");

  std::vector<std::int64_t> actual(k, 0);
  std::vector<std::int64_t> predicted(k, 0);
  std::int64_t trace = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto v = static_cast<std::int64_t>(cm.counts[i][j]);
      actual[i] += v;
      predicted[j] += v;
      if (i == j) trace += v;
    }
  }

  ClassificationMetrics m;
  const auto total = static_cast<double>(n);
  m.ca = static_cast<double>(trace) / total;
  for (std::size_t c = 0; c < k; ++c) {
    const auto tp = static_cast<double>(cm.counts[c][c]);
    const double fp = static_cast<double>(predicted[c]) - tp;
    const double fn = static_cast<double>(actual[c]) - tp;
    const double tn = total - tp - fp - fn;
    const double precision = ratio_or_zero(tp, tp + fp);
    const double recall = ratio_or_zero(tp, tp + fn);
    const double specificity = ratio_or_zero(tn, tn + fp);
    const double f1 = ratio_or_zero(2.0 * precision * recall, precision + recall);
    const double weight = static_cast<double>(actual[c]) / total;
    m.precision += weight * precision;
    m.recall += weight * recall;
    m.specificity += weight * specificity;
    m.f1 += weight * f1;
  }

  // Multiclass MCC in covariance form; all partial sums are exact integers.
  const auto s = static_cast<std::int64_t>(n);
  std::int64_t pt = 0;
  std::int64_t pp = 0;
  std::int64_t tt = 0;
  for (std::size_t c = 0; c < k; ++c) {
    pt += predicted[c] * actual[c];
    pp += predicted[c] * predicted[c];
    tt += actual[c] * actual[c];
  }
  const auto cov_xy = static_cast<double>(trace * s - pt);
  const auto cov_xx = static_cast<double>(s * s - pp);
  const auto cov_yy = static_cast<double>(s * s - tt);
  m.mcc = (cov_xx > 0.0 && cov_yy > 0.0) ? cov_xy / std::sqrt(cov_xx * cov_yy) : 0.0;
  return m;
}

std::optional<double> binary_auc(std::span<const double> scores, const std::vector<bool>& positive) {
  if (scores.size() != positive.size()) throw InvalidArgument("auc: length mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  std::uint64_t negatives_below = 0;
  std::uint64_t concordant = 0;
  std::uint64_t ties = 0;
  std::uint64_t pos_total = 0;
  for (std::size_t g = 0; g < order.size();) {
    std::size_t end = g;
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
    while (end < order.size() && scores[order[end]] == scores[order[g]]) {
      (positive[order[end]] ? pos : neg) += 1;
      ++end;
    }
    concordant += pos * negatives_below;
    ties += pos * neg;
    negatives_below += neg;
    pos_total += pos;
    g = end;
  }
  if (pos_total == 0 || negatives_below == 0) return std::nullopt;
  return (static_cast<double>(concordant) + 0.5 * static_cast<double>(ties)) /
         (static_cast<double>(pos_total) * static_cast<double>(negatives_below));
}

double auc(std::span<const ProbabilityTable> scores, std::span<const std::size_t> actual,
           std::size_t class_count) {
  if (scores.size() != actual.size()) throw InvalidArgument("auc: length mismatch");
  double weighted = 0.0;
  double support = 0.0;
  std::vector<double> column(scores.size());
  std::vector<bool> positive(scores.size());
  for (std::size_t c = 0; c < class_count; ++c) {
    std::size_t positives = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i].size() != class_count) throw InvalidArgument("auc: probability table width");
      column[i] = scores[i][c];
      positive[i] = actual[i] == c;
      positives += positive[i] ? 1 : 0;
    }
    const auto value = binary_auc(column, positive);
    if (!value) continue;
    weighted += static_cast<double>(positives) * *value;
    support += static_cast<double>(positives);
  }
  if (support == 0.0) throw InvalidArgument("auc: no class has both positive and negative examples");
  return weighted / support;
}

double mean_log_loss(std::span<const ProbabilityTable> scores, std::span<const std::size_t> actual) {
  if (scores.size() != actual.size()) throw InvalidArgument("log loss: length mismatch");
  if (scores.empty()) throw InvalidArgument("log loss: no examples");
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) sum += cross_entropy_loss(scores[i], actual[i]);
  return sum / static_cast<double>(scores.size());
}

RegressionErrors regression_errors(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size()) throw InvalidArgument("regression_errors: length mismatch");
  if (actual.empty()) throw InvalidArgument("regression_errors: no values");
  double mean = 0.0;
  for (double y : actual) mean += y;
  mean /= static_cast<double>(actual.size());
  RegressionErrors e;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    e.sse += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    e.sst += (actual[i] - mean) * (actual[i] - mean);
  }
  if (e.sst > 0.0) e.r2 = 1.0 - e.sse / e.sst;
  return e;
}

const char* to_string(Metric metric) {
  switch (metric) {
    case Metric::kAuc: return "auc";
    case Metric::kCa: return "ca";
    case Metric::kF1: return "f1";
    case Metric::kPrecision: return "precision";
    case Metric::kRecall: return "recall";
    case Metric::kSpecificity: return "specificity";
    case Metric::kMcc: return "mcc";
    case Metric::kLogLoss: return "log_loss";
  }
  return "unknown";
}

const char* display_name(Metric metric) {
  switch (metric) {
    case Metric::kAuc: return "AUC";
    case Metric::kCa: return "CA";
    case Metric::kF1: return "F1";
    case Metric::kPrecision: return "Precision";
    case Metric::kRecall: return "Recall";
    case Metric::kSpecificity: return "Specificity";
    case Metric::kMcc: return "MCC";
    case Metric::kLogLoss: return "Logistic loss";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  for (auto m : kAllMetrics) {
    if (name == to_string(m)) return m;
  }
  throw InvalidArgument("unknown metric: " + std::string(name));
}

double MetricSuite::get(Metric metric) const {
  switch (metric) {
    case Metric::kAuc: return auc;
    case Metric::kCa: return ca;
    case Metric::kF1: return f1;
    case Metric::kPrecision: return precision;
    case Metric::kRecall: return recall;
    case Metric::kSpecificity: return specificity;
    case Metric::kMcc: return mcc;
    case Metric::kLogLoss: return log_loss;
  }
  return 0.0;
}

namespace {

std::vector<std::size_t> argmax_all(std::span<const ProbabilityTable> scores) {
  std::vector<std::size_t> out;
  out.reserve(scores.size());
  for (const auto& p : scores) out.push_back(argmax(p));
  return out;
}

MetricSuite suite_from(std::span<const ProbabilityTable> scores, std::span<const std::size_t> actual,
                       const std::vector<std::string>& classes, double auc_value) {
  const auto predicted = argmax_all(scores);
  const auto cm = confusion_matrix(actual, std::span<const std::size_t>(predicted), classes);
  const auto cls = classification_metrics(cm);
  MetricSuite s;
  s.auc = auc_value;
  s.ca = cls.ca;
  s.f1 = cls.f1;
  s.precision = cls.precision;
  s.recall = cls.recall;
  s.specificity = cls.specificity;
  s.mcc = cls.mcc;
  s.log_loss = mean_log_loss(scores, actual);
  return s;
}

}  // namespace

MetricSuite score_predictions(std::span<const ProbabilityTable> scores,
                              std::span<const std::size_t> actual,
                              const std::vector<std::string>& classes) {
  return suite_from(scores, actual, classes, auc(scores, actual, classes.size()));
}

const FoldScores& ModelEvaluation::scores(Metric metric) const {
  for (const auto& fs : fold_scores) {
    if (fs.metric == metric) return fs;
  }
  throw InvalidArgument(std::string("no fold scores for metric ") + to_string(metric));
}

EvaluationReport cross_validate(const LabeledDataset& data, const std::vector<Learner>& learners,
                                const FoldAssignment& folds) {
  if (folds.fold.size() != data.size()) throw InvalidArgument("cross_validate: fold/row mismatch");
  if (folds.k < 2) throw InvalidArgument("cross_validate: k must be at least 2");
  if (data.class_count() < 2) throw InvalidArgument("cross_validate: need at least two classes");
  for (auto f : folds.fold) {
    if (f >= folds.k) throw InvalidArgument("cross_validate: fold index out of range");
  }

  const std::size_t classes = data.class_count();
  std::vector<LabeledDataset> train_sets;
  std::vector<std::vector<std::size_t>> test_sets;
  for (std::size_t f = 0; f < folds.k; ++f) {
    const auto train = folds.train_rows(f);
    std::vector<bool> seen(classes, false);
    for (auto r : train) seen[data.label(r)] = true;
    for (std::size_t c = 0; c < classes; ++c) {
      if (!seen[c]) {
        throw ProtocolError("cross_validate: training split of fold " + std::to_string(f) +
                            " has no rows of class " + data.class_names()[c]);
      }
    }
    train_sets.push_back(data.subset(train));
    test_sets.push_back(folds.test_rows(f));
  }

  EvaluationReport report;
  report.class_names = data.class_names();
  report.folds = folds;
  for (const auto& learner : learners) {
    ModelEvaluation eval;
    eval.name = learner.name;
    eval.probabilities.assign(data.size(), {});
    for (auto m : kAllMetrics) eval.fold_scores.push_back({learner.name, m, {}});

    for (std::size_t f = 0; f < folds.k; ++f) {
      const Predictor predictor = learner.fit(train_sets[f]);
      std::vector<ProbabilityTable> fold_scores;
      std::vector<std::size_t> fold_actual;
      for (auto r : test_sets[f]) {
        ProbabilityTable p = predictor(data.row(r));
        const double sum = std::accumulate(p.begin(), p.end(), 0.0);
        if (p.size() != classes || !(std::abs(sum - 1.0) <= 1e-9)) {
          throw Error("cross_validate: learner " + learner.name +
                      " returned an invalid probability table");
        }
        eval.probabilities[r] = p;
        fold_scores.push_back(std::move(p));
        fold_actual.push_back(data.label(r));
      }
      if (fold_scores.empty()) {
        throw ProtocolError("cross_validate: fold " + std::to_string(f) + " has no rows");
      }
      double fold_auc = 0.5;
      try {
        fold_auc = auc(fold_scores, fold_actual, classes);
      } catch (const InvalidArgument&) {
        // Single-class test fold: no ranking information.
      }
      const auto suite = suite_from(fold_scores, fold_actual, data.class_names(), fold_auc);
      for (auto& fs : eval.fold_scores) fs.values.push_back(suite.get(fs.metric));
    }

    eval.pooled = score_predictions(eval.probabilities, data.label_indices(), data.class_names());
    eval.predicted = argmax_all(eval.probabilities);
    eval.confusion = confusion_matrix(std::span<const std::size_t>(data.label_indices()),
                                      std::span<const std::size_t>(eval.predicted),
                                      data.class_names());
    report.models.push_back(std::move(eval));
  }
  return report;
}

ComparisonMatrix compare_models(std::span<const FoldScores> scores) {
  ComparisonMatrix out;
  if (scores.empty()) return out;
  out.metric = scores.front().metric;
  const std::size_t k = scores.front().values.size();
  if (k == 0) throw InvalidArgument("compare_models: no folds");
  for (const auto& s : scores) {
    if (s.metric != out.metric) throw InvalidArgument("compare_models: mixed metrics");
    if (s.values.size() != k) throw InvalidArgument("compare_models: mismatched fold counts");
    out.models.push_back(s.model);
  }
  const std::size_t m = scores.size();
  out.entries.assign(m, std::vector<std::optional<double>>(m));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      double wins = 0.0;
      double ties = 0.0;
      for (std::size_t f = 0; f < k; ++f) {
        if (scores[a].values[f] > scores[b].values[f]) wins += 1.0;
        else if (scores[a].values[f] == scores[b].values[f]) ties += 1.0;
      }
      out.entries[a][b] = (wins + 0.5 * ties) / static_cast<double>(k);
    }
  }
  return out;
}

ComparisonMatrix compare_models(const EvaluationReport& report, Metric metric) {
  std::vector<FoldScores> scores;
  for (const auto& m : report.models) scores.push_back(m.scores(metric));
  return compare_models(scores);
}

void write_report_csv(std::ostream& out, const EvaluationReport& report) {
  constexpr std::array<Metric, 8> columns = {Metric::kAuc,       Metric::kCa,  Metric::kF1,
                                             Metric::kPrecision, Metric::kRecall, Metric::kMcc,
                                             Metric::kSpecificity, Metric::kLogLoss};
  out << "model";
  for (auto m : columns) out << ',' << to_string(m);
  out << '\n';
  for (const auto& model : report.models) {
    out << csv::escape(model.name);
    for (auto m : columns) out << ',' << csv::format_real(model.pooled.get(m));
    out << '\n';
  }
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm) {
  out << "counts";
  for (const auto& c : cm.class_names) out << ',' << csv::escape(c);
  out << '\n';
  for (std::size_t i = 0; i < cm.counts.size(); ++i) {
    out << csv::escape(cm.class_names[i]);
    for (auto v : cm.counts[i]) out << ',' << v;
    out << '\n';
  }
  out << "\nproportions";
  for (const auto& c : cm.class_names) out << ',' << csv::escape(c);
  out << '\n';
  const auto props = cm.proportions();
  for (std::size_t i = 0; i < props.size(); ++i) {
    out << csv::escape(cm.class_names[i]);
    for (auto v : props[i]) out << ',' << csv::format_real(v);
    out << '\n';
  }
}

void write_predictions_csv(std::ostream& out, const LabeledDataset& data,
                           const EvaluationReport& report, const ModelEvaluation& model) {
  out << "id,fold,actual,predicted";
  for (const auto& c : report.class_names) out << ',' << csv::escape("p_" + c);
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << csv::escape(data.id(i)) << ',' << report.folds.fold[i] << ','
        << csv::escape(report.class_names[data.label(i)]) << ','
        << csv::escape(report.class_names[model.predicted[i]]);
    for (double p : model.probabilities[i]) out << ',' << csv::format_real(p);
    out << '\n';
  }
}

void write_fold_scores_csv(std::ostream& out, const EvaluationReport& report) {
  out << "model,metric";
  for (std::size_t f = 0; f < report.folds.k; ++f) out << ",fold_" << f;
  out << '\n';
  for (const auto& model : report.models) {
    for (const auto& fs : model.fold_scores) {
      out << csv::escape(model.name) << ',' << to_string(fs.metric);
      for (double v : fs.values) out << ',' << csv::format_real(v);
      out << '\n';
    }
  }
}

void write_comparison_csv(std::ostream& out, const ComparisonMatrix& matrix) {
  for (const auto& name : matrix.models) out << ',' << csv::escape(name);
  out << '\n';
  for (std::size_t a = 0; a < matrix.models.size(); ++a) {
    out << csv::escape(matrix.models[a]);
    for (const auto& e : matrix.entries[a]) {
      out << ',';
      if (e) out << csv::format_real(*e);
    }
    out << '\n';
  }
}

}  // namespace bladeinspect
