#include "bladeinspect/model_io.hpp"

#include <json.hpp>

#include "bladeinspect/error.hpp"

namespace bladeinspect {

using nlohmann::json;

ProbabilityTable predict(const TrainedModel& model, std::span<const double> x) {
  return std::visit([&](const auto& m) { return m.predict(x); }, model);
}

namespace {

json to_json_value(const LogisticModel& m) {
  return {{"kind", "logistic"},
          {"class_names", m.class_names},
          {"feature_count", m.feature_count},
          {"intercepts", m.intercepts},
          {"coefficients", m.coefficients}};
}

json to_json_value(const TreeModel& m) {
  json nodes = json::array();
  for (const auto& n : m.nodes) {
    json node = {{"leaf", n.is_leaf}, {"depth", n.depth}, {"samples", n.samples},
                 {"impurity", n.impurity}};
    if (!n.is_leaf) {
      node["feature"] = n.feature;
      node["threshold"] = n.threshold;
      node["left"] = n.left;
      node["right"] = n.right;
    }
    if (m.criterion == SplitCriterion::kGini) {
      node["class_counts"] = n.class_counts;
      node["class_probabilities"] = n.class_probabilities;
    } else {
      node["mean_target"] = n.mean_target;
    }
    nodes.push_back(std::move(node));
  }
  return {{"kind", "tree"},
          {"criterion", m.criterion == SplitCriterion::kGini ? "gini" : "mse"},
          {"class_names", m.class_names},
          {"feature_count", m.feature_count},
          {"nodes", std::move(nodes)}};
}

json to_json_value(const NaiveBayesModel& m) {
  return {{"kind", "naive_bayes"},     {"class_names", m.class_names}, {"priors", m.priors},
          {"means", m.means},          {"variances", m.variances},
          {"variance_floor", m.variance_floor}};
}

json to_json_value(const MlpModel& m) {
  return {{"kind", "mlp"},
          {"class_names", m.class_names()},
          {"layer_sizes", m.layer_sizes()},
          {"activation", to_string(m.activation())},
          {"params", std::vector<double>(m.params().begin(), m.params().end())}};
}

TreeModel tree_from_json(const json& j) {
  TreeModel m;
  const auto criterion = j.at("criterion").get<std::string>();
  if (criterion != "gini" && criterion != "mse") throw Error("model json: unknown criterion");
  m.criterion = criterion == "gini" ? SplitCriterion::kGini : SplitCriterion::kMse;
  m.class_names = j.at("class_names").get<std::vector<std::string>>();
  m.feature_count = j.at("feature_count").get<std::size_t>();
  for (const auto& jn : j.at("nodes")) {
    TreeNode n;
    n.is_leaf = jn.at("leaf").get<bool>();
    n.depth = jn.at("depth").get<std::size_t>();
    n.samples = jn.at("samples").get<std::size_t>();
    n.impurity = jn.at("impurity").get<double>();
    if (!n.is_leaf) {
      n.feature = jn.at("feature").get<std::size_t>();
      n.threshold = jn.at("threshold").get<double>();
      n.left = jn.at("left").get<std::size_t>();
      n.right = jn.at("right").get<std::size_t>();
    }
    if (m.criterion == SplitCriterion::kGini) {
      n.class_counts = jn.at("class_counts").get<std::vector<std::size_t>>();
      n.class_probabilities = jn.at("class_probabilities").get<std::vector<double>>();
    } else {
      n.mean_target = jn.at("mean_target").get<double>();
    }
    m.nodes.push_back(std::move(n));
  }
  for (const auto& n : m.nodes) {
    if (!n.is_leaf && (n.left >= m.nodes.size() || n.right >= m.nodes.size() ||
                       n.feature >= m.feature_count)) {
      throw Error("model json: dangling tree node reference");
    }
  }
  if (m.nodes.empty()) throw Error("model json: tree has no nodes");
  return m;
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
  return std::visit([](const auto& m) { return to_json_value(m).dump(); }, model);
}

TrainedModel model_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "logistic") {
      LogisticModel m;
      m.class_names = j.at("class_names").get<std::vector<std::string>>();
      m.feature_count = j.at("feature_count").get<std::size_t>();
      m.intercepts = j.at("intercepts").get<std::vector<double>>();
      m.coefficients = j.at("coefficients").get<std::vector<std::vector<double>>>();
      if (m.intercepts.size() != m.class_names.size() ||
          m.coefficients.size() != m.class_names.size()) {
        throw Error("model json: logistic row count mismatch");
      }
      for (const auto& row : m.coefficients) {
        if (row.size() != m.feature_count) throw Error("model json: logistic width mismatch");
      }
      return m;
    }
    if (kind == "tree") return tree_from_json(j);
    if (kind == "naive_bayes") {
      NaiveBayesModel m;
      m.class_names = j.at("class_names").get<std::vector<std::string>>();
      m.priors = j.at("priors").get<std::vector<double>>();
      m.means = j.at("means").get<std::vector<std::vector<double>>>();
      m.variances = j.at("variances").get<std::vector<std::vector<double>>>();
      m.variance_floor = j.at("variance_floor").get<double>();
      if (m.priors.size() != m.class_names.size() || m.means.size() != m.priors.size() ||
          m.variances.size() != m.priors.size()) {
        throw Error("model json: naive bayes class count mismatch");
      }
      return m;
    }
    if (kind == "mlp") {
      MlpModel m(j.at("layer_sizes").get<std::vector<std::size_t>>(),
                 parse_activation(j.at("activation").get<std::string>()),
                 j.at("class_names").get<std::vector<std::string>>());
      const auto params = j.at("params").get<std::vector<double>>();
      if (params.size() != m.params().size()) throw Error("model json: mlp parameter count");
      std::copy(params.begin(), params.end(), m.params().begin());
      return m;
    }
    throw Error("model json: unknown kind " + kind);
  } catch (const json::exception& e) {
    throw Error(std::string("model json: ") + e.what());
  }
}

}  // namespace bladeinspect
