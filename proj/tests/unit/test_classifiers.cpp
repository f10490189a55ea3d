#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../oracles.hpp"
#include "bladeinspect/classifiers.hpp"
#include "bladeinspect/error.hpp"
#include "bladeinspect/learners.hpp"
#include "bladeinspect/logistic.hpp"
#include "bladeinspect/mlp.hpp"
#include "bladeinspect/model_io.hpp"
#include "bladeinspect/naive_bayes.hpp"
#include "bladeinspect/tree.hpp"

using namespace bladeinspect;

namespace {

LabeledDataset make_dataset(const std::vector<std::vector<double>>& rows,
                            const std::vector<std::string>& labels) {
  FeatureMatrix m;
  for (std::size_t j = 0; j < rows[0].size(); ++j) m.columns.push_back("x" + std::to_string(j));
  m.labels = labels;
  m.rows = rows;
  for (std::size_t i = 0; i < rows.size(); ++i) m.ids.push_back("r" + std::to_string(i));
  return LabeledDataset(m);
}

double normal(SplitMix64& rng) {
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

LabeledDataset blobs(std::uint64_t seed, std::size_t per_class, double offset) {
  SplitMix64 rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < per_class; ++i) {
    rows.push_back({-offset / 2 + normal(rng), -offset / 2 + normal(rng)});
    labels.push_back("neg");
    rows.push_back({offset / 2 + normal(rng), offset / 2 + normal(rng)});
    labels.push_back("pos");
  }
  return make_dataset(rows, labels);
}

double training_accuracy(const TrainedModel& model, const LabeledDataset& ds) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) correct += argmax(predict(model, ds.row(i))) == ds.label(i);
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

// Norm-wise relative error of an analytic gradient against central differences.
template <typename Loss>
double gradient_error(std::vector<double> params, const std::vector<double>& analytic, Loss&& loss) {
  const double h = 1e-5;
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double keep = params[i];
    params[i] = keep + h;
    const double up = loss(params);
    params[i] = keep - h;
    const double down = loss(params);
    params[i] = keep;
    const double numeric = (up - down) / (2.0 * h);
    diff = std::max(diff, std::fabs(numeric - analytic[i]));
    scale = std::max({scale, std::fabs(numeric), std::fabs(analytic[i])});
  }
  return diff / std::max(scale, 1e-12);
}

}  // namespace

TEST_CASE("sigmoid") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(2.0) == doctest::Approx(0.880797).epsilon(1e-6));
  for (double z : {0.3, 1.7, 12.0, 40.0}) CHECK(std::fabs(sigmoid(-z) - (1.0 - sigmoid(z))) <= 1e-15);
  CHECK(sigmoid(-1000.0) == 0.0);
  CHECK(sigmoid(1000.0) == 1.0);
}

TEST_CASE("logit") {
  CHECK(logit(0.5) == 0.0);
  CHECK(std::fabs(logit(sigmoid(3.7)) - 3.7) <= 1e-9);
  CHECK(logit(0.9) == doctest::Approx(std::log(9.0)).epsilon(1e-5));
  CHECK_THROWS_AS(logit(0.0), InvalidArgument);
  CHECK_THROWS_AS(logit(1.0), InvalidArgument);
}

TEST_CASE("cross-entropy loss with clipping") {
  const std::vector<double> perfect{1.0, 0.0};
  CHECK(cross_entropy_loss(perfect, 0) == doctest::Approx(-std::log(1.0 - 1e-15)));
  const std::vector<double> uniform{1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(cross_entropy_loss(uniform, 2) == doctest::Approx(1.0986).epsilon(1e-4));
  CHECK(cross_entropy_loss(perfect, 1) == doctest::Approx(34.5388).epsilon(1e-3));
  CHECK_THROWS_AS(cross_entropy_loss(perfect, 2), InvalidArgument);
}

TEST_CASE("impurities") {
  CHECK(gini_impurity(std::vector<double>{1.0, 0.0}) == 0.0);
  CHECK(gini_impurity(std::vector<double>{0.5, 0.5}) == 0.5);
  CHECK(gini_impurity(std::vector<double>{0.7, 0.3}) == doctest::Approx(0.42));
  CHECK(gini_impurity(std::vector<double>{0.25, 0.25, 0.25, 0.25}) == doctest::Approx(0.75));
  CHECK(mse_impurity(std::vector<double>{5, 5, 5}) == 0.0);
  CHECK(mse_impurity(std::vector<double>{0, 2}) == 1.0);
  CHECK(mse_impurity(std::vector<double>{1}) == 0.0);
  CHECK_THROWS_AS(mse_impurity(std::vector<double>{}), InvalidArgument);
}

TEST_CASE("gradient step") {
  CHECK(sgd_update(std::vector<double>{1.0}, std::vector<double>{2.0}, 0.1)[0] == doctest::Approx(0.8));
  CHECK(sgd_update(std::vector<double>{1.5}, std::vector<double>{0.0}, 0.1)[0] == 1.5);
  std::vector<double> theta{1.0, -2.0};
  const std::vector<double> g1{0.5, 1.0}, g2{-0.25, 3.0};
  sgd_step(theta, g1, 0.1);
  sgd_step(theta, g2, 0.1);
  CHECK(theta[0] == doctest::Approx(1.0 - 0.1 * 0.25));
  CHECK(theta[1] == doctest::Approx(-2.0 - 0.1 * 4.0));
  CHECK_THROWS_AS(sgd_update(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}, 0.1),
                  InvalidArgument);
}

TEST_CASE("argmax ties go to the earliest class") {
  CHECK(argmax(std::vector<double>{0.4, 0.4, 0.2}) == 0);
  CHECK(argmax(std::vector<double>{0.1, 0.5, 0.4}) == 1);
}

// ---- logistic regression ----

TEST_CASE("logistic regression separates a 1-D problem") {
  const auto ds = make_dataset({{-1}, {-2}, {1}, {2}}, {"A", "A", "B", "B"});
  const auto model = train_logistic(ds);
  CHECK(model.coefficients[1][0] > 0.0);
  CHECK(model.coefficients[0][0] < 0.0);
  CHECK(training_accuracy(model, ds) == 1.0);
}

TEST_CASE("uninformative features give prior probabilities") {
  const auto ds = make_dataset({{0, 0}, {0, 0}, {0, 0}, {0, 0}}, {"A", "B", "A", "B"});
  const auto p = train_logistic(ds).predict(std::vector<double>{0, 0});
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("a point on the decision boundary is a coin flip") {
  LogisticModel m;
  m.class_names = {"A", "B"};
  m.feature_count = 1;
  m.intercepts = {-1.0, 1.0};
  m.coefficients = {{2.0}, {-2.0}};
  const auto p = predict_logistic(m, std::vector<double>{0.5});
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.5);
  CHECK_THROWS_AS(predict_logistic(m, std::vector<double>{0.5, 1.0}), InvalidArgument);
}

TEST_CASE("logistic loss gradient matches finite differences") {
  SplitMix64 rng(11);
  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
  for (int i = 0; i < 15; ++i) {
    rows.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)});
    targets.push_back(rng.uniform() < 0.5 ? 0.0 : 1.0);
  }
  const BinaryLogisticLoss loss(rows, targets, 0.3);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> params;
    for (std::size_t i = 0; i < loss.parameter_count(); ++i) params.push_back(rng.uniform(-1, 1));
    const double err = gradient_error(params, loss.gradient(params),
                                      [&](const std::vector<double>& p) { return loss.value(p); });
    CHECK(err < 1e-5);
  }
}

TEST_CASE("intercept is not penalized") {
  const std::vector<std::vector<double>> rows{{1.0}, {2.0}};
  const BinaryLogisticLoss with(rows, {0.0, 1.0}, 10.0);
  const BinaryLogisticLoss without(rows, {0.0, 1.0}, 0.0);
  const std::vector<double> params{3.0, 0.0};
  CHECK(with.value(params) == without.value(params));
  const std::vector<double> slope{0.0, 2.0};
  CHECK(with.value(slope) == doctest::Approx(without.value(slope) + 0.5 * 10.0 * 4.0));
}

TEST_CASE("logistic configuration and data checks") {
  const auto one_class = make_dataset({{1}, {2}}, {"A", "A"});
  CHECK_THROWS_AS(train_logistic(one_class), InvalidArgument);
  const auto ds = make_dataset({{1}, {2}}, {"A", "B"});
  LogisticConfig bad;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(train_logistic(ds, bad), InvalidArgument);
  const auto nonfinite = make_dataset({{1}, {NAN}}, {"A", "B"});
  CHECK_THROWS_AS(train_logistic(nonfinite), InvalidArgument);
}

// ---- tree ----

TEST_CASE("tree finds the single pure split") {
  const auto ds = make_dataset({{0}, {1}, {2}, {3}}, {"A", "A", "B", "B"});
  const auto tree = train_tree(ds);
  REQUIRE(tree.nodes.size() == 3);
  CHECK_FALSE(tree.nodes[0].is_leaf);
  CHECK(tree.nodes[0].feature == 0);
  CHECK(tree.nodes[0].threshold == 1.5);
  CHECK(tree.nodes[tree.nodes[0].left].impurity == 0.0);
  CHECK(tree.nodes[tree.nodes[0].right].impurity == 0.0);
  for (std::size_t i = 0; i < ds.size(); ++i) CHECK(tree.predict(ds.row(i))[ds.label(i)] == 1.0);
  CHECK(tree.predict(std::vector<double>{1.5})[0] == 1.0);
  CHECK(tree.predict(std::vector<double>{1.5000001})[1] == 1.0);
}

TEST_CASE("rows of a single present class give a single pure leaf") {
  const auto two = make_dataset({{0}, {1}, {2}, {9}}, {"A", "A", "A", "B"});
  const std::vector<std::size_t> rows{0, 1, 2};
  const auto tree = train_tree(two.subset(rows));
  REQUIRE(tree.nodes.size() == 1);
  CHECK(tree.nodes[0].impurity == 0.0);
  CHECK(tree.predict(std::vector<double>{9})[0] == 1.0);
  CHECK_THROWS_AS(train_tree(make_dataset({{0}, {1}}, {"A", "A"})), InvalidArgument);
}

TEST_CASE("a constant model predicts its leaf proportions everywhere") {
  const auto ds = make_dataset({{1}, {1}, {1}, {1}}, {"A", "B", "B", "B"});
  const auto tree = train_tree(ds);
  REQUIRE(tree.nodes.size() == 1);
  for (double x : {-5.0, 1.0, 7.0}) {
    const auto p = tree.predict(std::vector<double>{x});
    CHECK(p[0] == 0.25);
    CHECK(p[1] == 0.75);
  }
}

TEST_CASE("tree root split equals exhaustive search") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + rng.below(9);
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    std::vector<std::size_t> y;
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back({static_cast<double>(rng.below(5)), static_cast<double>(rng.below(5))});
      y.push_back(i < 2 ? i : rng.below(2));
      labels.push_back(y.back() ? "B" : "A");
    }
    const auto ds = make_dataset(rows, labels);
    for (std::size_t min_leaf : {1, 2}) {
      TreeConfig cfg;
      cfg.max_depth = 1;
      cfg.min_leaf = min_leaf;
      const auto tree = train_tree(ds, cfg);
      const auto expected = oracle::best_root_split(rows, y, 2, min_leaf);
      if (!expected) {
        CHECK(tree.nodes.size() == 1);
        continue;
      }
      REQUIRE(tree.nodes.size() == 3);
      CHECK(tree.nodes[0].feature == expected->feature);
      CHECK(tree.nodes[0].threshold == expected->threshold);
    }
  }
}

TEST_CASE("tree predictions are invariant under monotone feature maps") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<double>> rows, cubed;
    std::vector<std::string> labels;
    for (int i = 0; i < 12; ++i) {
      rows.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2)});
      cubed.push_back({std::pow(rows.back()[0], 3), std::pow(rows.back()[1], 3)});
      labels.push_back(i < 2 ? (i ? "B" : "A") : (rng.uniform() < 0.5 ? "A" : "B"));
    }
    const auto a = train_tree(make_dataset(rows, labels));
    const auto b = train_tree(make_dataset(cubed, labels));
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(a.predict(rows[i]) == b.predict(cubed[i]));
  }
}

TEST_CASE("tree respects depth and leaf limits") {
  SplitMix64 rng(5);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (int i = 0; i < 60; ++i) {
    rows.push_back({rng.uniform(), rng.uniform()});
    labels.push_back(rng.uniform() < 0.5 ? "A" : "B");
  }
  TreeConfig cfg;
  cfg.max_depth = 3;
  cfg.min_leaf = 4;
  const auto tree = train_tree(make_dataset(rows, labels), cfg);
  CHECK(tree.depth() <= 3);
  for (const auto& node : tree.nodes) {
    if (node.is_leaf) CHECK(node.samples >= 4);
  }
  cfg.max_depth = 0;
  const auto stump = train_tree(make_dataset(rows, labels), cfg);
  CHECK(stump.nodes.size() == 1);
}

TEST_CASE("regression tree uses the MSE criterion") {
  const std::vector<std::vector<double>> rows{{0}, {1}, {2}, {3}};
  const std::vector<double> targets{1.0, 1.0, 5.0, 5.0};
  const auto tree = train_regression_tree(rows, targets);
  REQUIRE(tree.nodes.size() == 3);
  CHECK(tree.nodes[0].threshold == 1.5);
  CHECK(tree.nodes[0].impurity == 4.0);
  CHECK(tree.predict_value(std::vector<double>{0.2}) == 1.0);
  CHECK(tree.predict_value(std::vector<double>{2.7}) == 5.0);
}

// ---- naive Bayes ----

TEST_CASE("identical class distributions give the priors") {
  const auto same = make_dataset({{1}, {2}, {3}, {1}, {2}, {3}}, {"A", "A", "A", "B", "B", "B"});
  const auto model = train_naive_bayes(same);
  for (double x : {-3.0, 0.0, 2.0, 10.0}) {
    const auto p = model.predict(std::vector<double>{x});
    CHECK(std::fabs(p[0] - 0.5) <= 1e-9);
  }
}

TEST_CASE("symmetric 1-D model at the midpoint") {
  const auto ds = make_dataset({{-2}, {0}, {0}, {2}}, {"A", "A", "B", "B"});
  const auto p = train_naive_bayes(ds).predict(std::vector<double>{0.0});
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("naive Bayes posterior matches a density ratio") {
  NaiveBayesModel m;
  m.class_names = {"A", "B"};
  m.priors = {0.5, 0.5};
  m.means = {{2.0}, {0.0}};
  m.variances = {{1.0}, {1.0}};
  const auto p = predict_naive_bayes(m, std::vector<double>{0.0});
  const auto pdf = [](double x, double mu) { return std::exp(-(x - mu) * (x - mu) / 2) / std::sqrt(2 * std::numbers::pi); };
  const double ratio = pdf(0.0, 0.0) / (pdf(0.0, 0.0) + pdf(0.0, 2.0));
  CHECK(std::fabs(p[1] - ratio) <= 1e-12);
  CHECK(p[1] == doctest::Approx(0.880797).epsilon(1e-6));
}

TEST_CASE("constant features use the variance floor") {
  const auto ds = make_dataset({{1, 0}, {1, 1}, {3, 5}, {3, 6}}, {"A", "A", "B", "B"});
  const auto model = train_naive_bayes(ds);
  CHECK(model.variance_floor > 0.0);
  CHECK(model.variances[0][0] == model.variance_floor);
  const auto p = model.predict(std::vector<double>{2.0, 3.0});
  CHECK(std::isfinite(p[0]));
  CHECK(std::isfinite(p[1]));
  CHECK(std::fabs(p[0] + p[1] - 1.0) <= 1e-12);

  const auto flat = make_dataset({{1}, {1}, {1}, {1}}, {"A", "A", "B", "B"});
  const auto q = train_naive_bayes(flat).predict(std::vector<double>{7.0});
  CHECK(q[0] == doctest::Approx(0.5));
}

TEST_CASE("far-away points do not underflow") {
  const auto ds = make_dataset({{0}, {1}, {10}, {11}}, {"A", "A", "B", "B"});
  const auto p = train_naive_bayes(ds).predict(std::vector<double>{1e6});
  CHECK(std::isfinite(p[0]));
  CHECK(p[1] == doctest::Approx(1.0));
}

// ---- MLP ----

TEST_CASE("zero network is uniform") {
  const MlpModel m({3, 4, 3}, Activation::kRelu, {"a", "b", "c"});
  const auto p = mlp_forward(m, std::vector<double>{1, -2, 3});
  for (double v : p) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("dead ReLU layer leaves the output bias") {
  MlpModel m({2, 3, 2}, Activation::kRelu, {"a", "b"});
  for (std::size_t j = 0; j < 3; ++j) {
    m.weight(0, j, 0) = 1.0;
    m.bias(0, j) = -10.0;
    m.weight(1, 0, j) = 5.0;
  }
  m.bias(1, 0) = 0.3;
  m.bias(1, 1) = -0.2;
  const auto p = mlp_forward(m, std::vector<double>{1, 1});
  const double expected = std::exp(0.3) / (std::exp(0.3) + std::exp(-0.2));
  CHECK(std::fabs(p[0] - expected) <= 1e-15);
}

TEST_CASE("2-2-2 network by hand") {
  MlpModel m({2, 2, 2}, Activation::kRelu, {"a", "b"});
  m.weight(0, 0, 0) = 0.1;
  m.weight(0, 0, 1) = -0.2;
  m.weight(0, 1, 0) = 0.3;
  m.weight(0, 1, 1) = 0.4;
  m.bias(0, 0) = 0.01;
  m.bias(0, 1) = -0.02;
  m.weight(1, 0, 0) = 0.5;
  m.weight(1, 0, 1) = -0.6;
  m.weight(1, 1, 0) = 0.7;
  m.weight(1, 1, 1) = 0.8;
  m.bias(1, 0) = 0.05;
  m.bias(1, 1) = -0.05;
  // h = relu(-0.29, 1.08) = (0, 1.08); o = (-0.598, 0.814)
  const auto p = mlp_forward(m, std::vector<double>{1.0, 2.0});
  const double o0 = 0.5 * 0.0 - 0.6 * 1.08 + 0.05;
  const double o1 = 0.7 * 0.0 + 0.8 * 1.08 - 0.05;
  CHECK(std::fabs(p[0] - 1.0 / (1.0 + std::exp(o1 - o0))) <= 1e-12);
  CHECK(std::fabs(p[1] - 1.0 / (1.0 + std::exp(o0 - o1))) <= 1e-12);
}

TEST_CASE("parameter layout is weights then biases per layer") {
  MlpModel m({3, 2, 4}, Activation::kTanh, {"a", "b", "c", "d"});
  CHECK(m.params().size() == 3 * 2 + 2 + 2 * 4 + 4);
  CHECK(m.weight_offset(0) == 0);
  CHECK(m.bias_offset(0) == 6);
  CHECK(m.weight_offset(1) == 8);
  CHECK(m.bias_offset(1) == 16);
  m.weight(0, 1, 2) = 9.0;
  CHECK(m.params()[5] == 9.0);
}

TEST_CASE("backprop matches finite differences") {
  SplitMix64 rng(31);
  for (auto act : {Activation::kRelu, Activation::kSigmoid, Activation::kTanh}) {
    for (int t = 0; t < 5; ++t) {
      MlpModel m({3, 4, 2}, act, {"a", "b"});
      for (auto& p : m.params()) p = rng.uniform(-1, 1);
      const std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const std::size_t label = rng.below(2);
      const std::vector<double> params(m.params().begin(), m.params().end());
      const double err = gradient_error(params, mlp_gradient(m, x, label, 0.05),
                                        [&](const std::vector<double>& p) {
                                          MlpModel probe = m;
                                          std::copy(p.begin(), p.end(), probe.params().begin());
                                          return mlp_loss(probe, x, label, 0.05);
                                        });
      CHECK(err < 1e-4);
    }
  }
}

TEST_CASE("MLP learns separable blobs") {
  const auto ds = blobs(9, 50, 6.0);
  const auto model = train_mlp(ds);
  CHECK(training_accuracy(model, ds) >= 0.95);
}

TEST_CASE("MLP training is deterministic per seed") {
  const auto ds = blobs(4, 20, 3.0);
  MlpConfig cfg;
  cfg.epochs = 20;
  cfg.seed = 123;
  const auto a = train_mlp(ds, cfg);
  const auto b = train_mlp(ds, cfg);
  CHECK(model_to_json(a) == model_to_json(b));
  cfg.seed = 124;
  CHECK(model_to_json(train_mlp(ds, cfg)) != model_to_json(a));
}

TEST_CASE("MLP initial weights are bounded by the fan-in") {
  const auto ds = blobs(4, 5, 3.0);
  MlpConfig cfg;
  cfg.epochs = 0;
  cfg.hidden = {4};
  cfg.seed = 1;
  try {
    const auto m = train_mlp(ds, cfg);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(std::fabs(m.weight(0, j, 0)) <= 1.0 / std::sqrt(2.0));
      CHECK(m.bias(0, j) == 0.0);
    }
  } catch (const InvalidArgument&) {
    // Zero epochs may be rejected by validation.
  }
}

TEST_CASE("activation names") {
  for (auto a : {Activation::kRelu, Activation::kSigmoid, Activation::kTanh}) {
    CHECK(parse_activation(to_string(a)) == a);
  }
  CHECK_THROWS_AS(parse_activation("softplus"), InvalidArgument);
}

// ---- persistence and learners ----

TEST_CASE("every model kind round-trips through JSON") {
  const auto ds = blobs(12, 15, 3.0);
  LearnerSettings settings;
  settings.mlp.epochs = 5;
  for (auto kind : {LearnerKind::kTree, LearnerKind::kNaiveBayes, LearnerKind::kLogistic, LearnerKind::kMlp}) {
    const auto model = train_model(kind, ds, settings);
    const auto text = model_to_json(model);
    const auto back = model_from_json(text);
    CHECK(model_to_json(back) == text);
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(predict(back, ds.row(i)) == predict(model, ds.row(i)));
  }
  CHECK_THROWS_AS(model_from_json("{\"kind\":\"svm\"}"), Error);
  CHECK_THROWS_AS(model_from_json("not json"), Error);
}

TEST_CASE("learners standardize with training statistics") {
  const auto ds = blobs(12, 15, 3.0);
  for (auto kind : {LearnerKind::kTree, LearnerKind::kNaiveBayes, LearnerKind::kLogistic, LearnerKind::kMlp}) {
    LearnerSettings settings;
    settings.mlp.epochs = 5;
    const auto learner = make_learner(kind, settings);
    CHECK(learner.name == to_string(kind));
    const auto predictor = learner.fit(ds);
    const auto p = predictor(ds.row(0));
    REQUIRE(p.size() == 2);
    CHECK(std::fabs(p[0] + p[1] - 1.0) <= 1e-12);
  }
  CHECK(parse_learner_kind("nb") == LearnerKind::kNaiveBayes);
  CHECK_THROWS_AS(parse_learner_kind("svm"), InvalidArgument);
}
