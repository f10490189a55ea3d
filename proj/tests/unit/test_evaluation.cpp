#include <doctest.h>

#include <cmath>
#include <sstream>

#include "../oracles.hpp"
#include "bladeinspect/dataset.hpp"
#include "bladeinspect/error.hpp"
#include "bladeinspect/evaluation.hpp"

using namespace bladeinspect;

namespace {

LabeledDataset make_dataset(const std::vector<double>& xs, const std::vector<std::string>& labels) {
  FeatureMatrix m;
  m.columns = {"x"};
  m.labels = labels;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    m.ids.push_back("r" + std::to_string(i));
    m.rows.push_back({xs[i]});
  }
  return LabeledDataset(m);
}

// Always answers the training split's most frequent class.
Learner majority_learner() {
  return {"majority", [](const LabeledDataset& train) -> Predictor {
            const auto counts = train.class_counts();
            const auto best = static_cast<std::size_t>(
                std::max_element(counts.begin(), counts.end()) - counts.begin());
            ProbabilityTable p(train.class_count(), 0.0);
            p[best] = 1.0;
            return [p](std::span<const double>) { return p; };
          }};
}

// Thresholds the single feature at zero.
Learner sign_learner() {
  return {"sign", [](const LabeledDataset&) -> Predictor {
            return [](std::span<const double> x) {
              const double p = x[0] > 0 ? 0.9 : 0.1;
              return ProbabilityTable{1.0 - p, p};
            };
          }};
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

TEST_CASE("confusion matrix counts and proportions") {
  const std::vector<std::string> actual{"A", "A", "B"}, predicted{"A", "B", "B"};
  const auto cm = confusion_matrix(actual, predicted, {"A", "B"});
  CHECK(cm.counts == std::vector<std::vector<std::size_t>>{{1, 1}, {0, 1}});
  CHECK(cm.total() == 3);
  CHECK(cm.proportions()[0] == std::vector<double>{0.5, 0.5});
  const auto perfect = confusion_matrix(actual, actual, {"A", "B", "C"});
  CHECK(perfect.counts == std::vector<std::vector<std::size_t>>{{2, 0, 0}, {0, 1, 0}, {0, 0, 0}});
  CHECK(perfect.proportions()[2] == std::vector<double>{0, 0, 0});
  CHECK_THROWS_AS(confusion_matrix(actual, std::vector<std::string>{"A"}, {"A", "B"}), InvalidArgument);
  CHECK_THROWS_AS(confusion_matrix(actual, std::vector<std::string>{"A", "A", "Z"}, {"A", "B"}),
                  InvalidArgument);
}

TEST_CASE("metrics of a perfect classifier") {
  ConfusionMatrix cm{{"A", "B", "C"}, {{3, 0, 0}, {0, 2, 0}, {0, 0, 5}}};
  const auto m = classification_metrics(cm);
  CHECK(m.ca == 1.0);
  CHECK(m.precision == 1.0);
  CHECK(m.recall == 1.0);
  CHECK(m.f1 == 1.0);
  CHECK(m.specificity == 1.0);
  CHECK(m.mcc == 1.0);
}

TEST_CASE("binary hand example") {
  ConfusionMatrix cm{{"A", "B"}, {{3, 1}, {1, 3}}};
  const auto m = classification_metrics(cm);
  CHECK(m.ca == 0.75);
  CHECK(m.precision == 0.75);
  CHECK(m.recall == 0.75);
  CHECK(m.f1 == 0.75);
  CHECK(m.mcc == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("constant predictor has zero MCC") {
  ConfusionMatrix cm{{"A", "B"}, {{5, 0}, {5, 0}}};
  const auto m = classification_metrics(cm);
  CHECK(m.mcc == 0.0);
  CHECK(m.recall == 0.5);
  CHECK(std::isfinite(m.precision));
  CHECK(std::isfinite(m.f1));
}

TEST_CASE("metrics match the brute-force oracle on random matrices") {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng.below(4);
    const std::size_t n = 1 + rng.below(50);
    std::vector<std::size_t> actual, predicted;
    for (std::size_t i = 0; i < n; ++i) {
      actual.push_back(rng.below(k));
      predicted.push_back(rng.uniform() < 0.5 ? actual.back() : rng.below(k));
    }
    std::vector<std::string> classes;
    for (std::size_t c = 0; c < k; ++c) classes.push_back(std::string(1, static_cast<char>('A' + c)));
    const auto got = classification_metrics(confusion_matrix(actual, predicted, classes));
    const auto want = oracle::metrics_from_pairs(actual, predicted, k);
    CHECK(std::fabs(got.ca - want.ca) <= 1e-12);
    CHECK(std::fabs(got.precision - want.precision) <= 1e-12);
    CHECK(std::fabs(got.recall - want.recall) <= 1e-12);
    CHECK(std::fabs(got.f1 - want.f1) <= 1e-12);
    CHECK(std::fabs(got.specificity - want.specificity) <= 1e-12);
    CHECK(std::fabs(got.mcc - want.mcc) <= 1e-12);
  }
}

TEST_CASE("binary AUC examples") {
  const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
  const std::vector<bool> pos{false, false, true, true};
  CHECK(binary_auc(s, pos).value() == 0.75);
  CHECK(binary_auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, pos).value() == 1.0);
  CHECK(binary_auc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, pos).value() == 0.5);
  CHECK_FALSE(binary_auc(s, std::vector<bool>{true, true, true, true}).has_value());
}

TEST_CASE("AUC matches pair counting and the trapezoidal ROC") {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    std::vector<double> s;
    std::vector<bool> pos;
    for (std::size_t i = 0; i < n; ++i) {
      s.push_back(static_cast<double>(rng.below(8)) / 8.0);
      pos.push_back(i == 0 ? true : i == 1 ? false : rng.uniform() < 0.4);
    }
    const double got = binary_auc(s, pos).value();
    CHECK(std::fabs(got - oracle::pair_auc(s, pos)) <= 1e-12);
    CHECK(std::fabs(got - oracle::trapezoid_auc(s, pos)) <= 1e-12);
  }
}

TEST_CASE("multiclass AUC is support weighted") {
  const std::vector<ProbabilityTable> scores{{0.8, 0.1, 0.1}, {0.3, 0.6, 0.1}, {0.5, 0.2, 0.3},
                                             {0.1, 0.1, 0.8}, {0.2, 0.5, 0.3}};
  const std::vector<std::size_t> actual{0, 1, 0, 2, 1};
  double expected = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<double> col;
    std::vector<bool> pos;
    double support = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      col.push_back(scores[i][c]);
      pos.push_back(actual[i] == c);
      support += actual[i] == c;
    }
    expected += support / 5.0 * oracle::pair_auc(col, pos);
  }
  CHECK(std::fabs(auc(scores, actual, 3) - expected) <= 1e-12);
  const std::vector<std::size_t> single{0, 0, 0, 0, 0};
  CHECK_THROWS_AS(auc(scores, single, 3), InvalidArgument);
}

TEST_CASE("log loss") {
  const std::vector<ProbabilityTable> perfect{{1, 0}, {0, 1}};
  const std::vector<std::size_t> a{0, 1};
  CHECK(mean_log_loss(perfect, a) <= 1e-14);
  const std::vector<ProbabilityTable> uniform{{0.5, 0.5}, {0.5, 0.5}};
  CHECK(mean_log_loss(uniform, a) == doctest::Approx(0.6931).epsilon(1e-4));
  const std::vector<ProbabilityTable> three{{1, 0}, {0.5, 0.5}, {0.75, 0.25}};
  const std::vector<std::size_t> b{0, 1, 1};
  CHECK(std::fabs(mean_log_loss(three, b) - std::log(2.0)) <= 1e-12);
}

TEST_CASE("regression errors") {
  const std::vector<double> y{1, 2, 3};
  auto e = regression_errors(y, y);
  CHECK(e.sse == 0.0);
  CHECK(*e.r2 == 1.0);
  e = regression_errors(y, std::vector<double>{2, 2, 2});
  CHECK(e.sse == e.sst);
  CHECK(*e.r2 == 0.0);
  e = regression_errors(y, std::vector<double>{1, 2, 5});
  CHECK(e.sse == 4.0);
  CHECK(e.sst == 2.0);
  CHECK(*e.r2 == -1.0);
  CHECK_FALSE(regression_errors(std::vector<double>{4, 4}, std::vector<double>{1, 2}).r2.has_value());
}

TEST_CASE("metric names") {
  for (auto m : kAllMetrics) CHECK(parse_metric(to_string(m)) == m);
  CHECK(std::string(display_name(Metric::kAuc)) == "AUC");
  CHECK(std::string(display_name(Metric::kCa)) == "CA");
  CHECK(std::string(display_name(Metric::kMcc)) == "MCC");
  CHECK_THROWS_AS(parse_metric("kappa"), InvalidArgument);
}

TEST_CASE("comparison entries") {
  std::vector<FoldScores> scores{{"A", Metric::kAuc, {0.8, 0.9, 0.7}}, {"B", Metric::kAuc, {0.6, 0.9, 0.8}}};
  const auto cm = compare_models(scores);
  CHECK(*cm.entries[0][1] == 0.5);
  CHECK(*cm.entries[1][0] == 0.5);
  CHECK_FALSE(cm.entries[0][0].has_value());
  scores[1].values = scores[0].values;
  CHECK(*compare_models(scores).entries[0][1] == 0.5);
  scores[1].values = {0.1, 0.2, 0.3};
  CHECK(*compare_models(scores).entries[0][1] == 1.0);
  CHECK(*compare_models(scores).entries[1][0] == 0.0);
}

TEST_CASE("log loss comparisons count the higher loss") {
  std::vector<FoldScores> scores{{"A", Metric::kLogLoss, {0.2, 0.3}}, {"B", Metric::kLogLoss, {0.4, 0.5}}};
  CHECK(*compare_models(scores).entries[0][1] == 0.0);
  CHECK(*compare_models(scores).entries[1][0] == 1.0);
}

TEST_CASE("comparison entries are complementary") {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng.below(20);
    std::vector<FoldScores> scores;
    for (int m = 0; m < 3; ++m) {
      FoldScores s{"m" + std::to_string(m), Metric::kCa, {}};
      for (std::size_t f = 0; f < k; ++f) s.values.push_back(static_cast<double>(rng.below(4)) / 4.0);
      scores.push_back(s);
    }
    const auto cm = compare_models(scores);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        if (a != b) CHECK(*cm.entries[a][b] + *cm.entries[b][a] == 1.0);
  }
}

TEST_CASE("mismatched fold scores are rejected") {
  std::vector<FoldScores> scores{{"A", Metric::kAuc, {0.8, 0.9}}, {"B", Metric::kAuc, {0.6}}};
  CHECK_THROWS_AS(compare_models(scores), InvalidArgument);
  scores[1] = {"B", Metric::kCa, {0.6, 0.7}};
  CHECK_THROWS_AS(compare_models(scores), InvalidArgument);
}

TEST_CASE("majority baseline scores at chance") {
  std::vector<double> xs;
  std::vector<std::string> labels;
  for (int i = 0; i < 40; ++i) {
    xs.push_back(i);
    labels.push_back(i % 2 ? "B" : "A");
  }
  const auto ds = make_dataset(xs, labels);
  const auto folds = stratified_kfold(ds, 4, 0);
  const auto report = cross_validate(ds, {majority_learner()}, folds);
  const auto& m = report.models[0];
  CHECK(m.pooled.ca == doctest::Approx(0.5).epsilon(0.1));
  CHECK(m.pooled.auc == 0.5);
  CHECK(m.pooled.mcc == 0.0);
}

TEST_CASE("cross-validation pools out-of-fold predictions") {
  const auto ds = make_dataset({-3, -2, -1, -0.5, 0.5, 1, 2, 3, -4, 4}, {"A", "A", "A", "B", "B", "B", "B", "B", "A", "A"});
  const auto folds = stratified_kfold(ds, 2, 5);
  const auto report = cross_validate(ds, {sign_learner(), majority_learner()}, folds);
  REQUIRE(report.models.size() == 2);
  const auto& m = report.models[0];
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(m.predicted[i] == (ds.row(i)[0] > 0 ? 1u : 0u));
    correct += m.predicted[i] == ds.label(i);
  }
  CHECK(m.pooled.ca == static_cast<double>(correct) / ds.size());
  CHECK(m.fold_scores.size() == kAllMetrics.size());
  CHECK(m.scores(Metric::kCa).values.size() == 2);
  CHECK(report.folds.fold == folds.fold);
}

TEST_CASE("a training split missing a class is a protocol error") {
  // Class C has one row; its fold's complement lacks C.
  const auto ds = make_dataset({1, 2, 3, 4, 5}, {"A", "A", "B", "B", "C"});
  FoldAssignment folds{2, {0, 1, 0, 1, 0}};
  try {
    cross_validate(ds, {majority_learner()}, folds);
    FAIL("expected a protocol error");
  } catch (const ProtocolError& e) {
    const std::string what = e.what();
    CHECK(what.find("fold 0") != std::string::npos);
    CHECK(what.find("C") != std::string::npos);
  }
}

TEST_CASE("single-class test folds score AUC 0.5") {
  const auto ds = make_dataset({-1, -2, -3, -4, 1, 2, 3, 4}, {"A", "A", "A", "A", "B", "B", "B", "B"});
  FoldAssignment folds{3, {0, 0, 1, 2, 1, 1, 2, 2}};
  const auto report = cross_validate(ds, {sign_learner()}, folds);
  const auto& values = report.models[0].scores(Metric::kAuc).values;
  CHECK(values == std::vector<double>{0.5, 1.0, 1.0});
  for (const auto& fs : report.models[0].fold_scores)
    for (double v : fs.values) CHECK(std::isfinite(v));
}

TEST_CASE("report and table writers") {
  const auto ds = make_dataset({-3, -2, -1, -0.5, 0.5, 1, 2, 3}, {"A", "A", "A", "B", "B", "B", "B", "A"});
  const auto folds = stratified_kfold(ds, 2, 1);
  const auto report = cross_validate(ds, {sign_learner(), majority_learner()}, folds);

  std::stringstream rs;
  write_report_csv(rs, report);
  std::string header;
  std::getline(rs, header);
  CHECK(split(header) == std::vector<std::string>{"model", "auc", "ca", "f1", "precision", "recall",
                                                  "mcc", "specificity", "log_loss"});
  std::string first;
  std::getline(rs, first);
  CHECK(split(first).size() == 9);
  CHECK(split(first)[0] == "sign");

  std::stringstream cs;
  write_comparison_csv(cs, compare_models(report, Metric::kCa));
  std::getline(cs, header);
  CHECK(header == ",sign,majority");
  std::string row;
  std::getline(cs, row);
  CHECK(split(row).size() == 3);
  CHECK(split(row)[1].empty());

  std::stringstream ps;
  write_predictions_csv(ps, ds, report, report.models[0]);
  std::getline(ps, header);
  CHECK(header == "id,fold,actual,predicted,p_A,p_B");

  std::stringstream fs;
  write_fold_scores_csv(fs, report);
  std::getline(fs, header);
  CHECK(header == "model,metric,fold_0,fold_1");

  std::stringstream ms;
  write_confusion_csv(ms, report.models[0].confusion);
  std::string text = ms.str();
  CHECK(text.find("\n\n") != std::string::npos);
}
