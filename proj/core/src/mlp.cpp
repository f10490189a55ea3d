#include "bladeinspect/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bladeinspect/error.hpp"
#include "bladeinspect/rng.hpp"
#include "training_checks.hpp"

namespace bladeinspect {

const char* to_string(Activation activation) {
  switch (activation) {
    case Activation::kRelu: return "relu";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kTanh: return "tanh";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "sigmoid" || name == "logistic") return Activation::kSigmoid;
  if (name == "tanh") return Activation::kTanh;
  throw InvalidArgument("unknown activation: " + std::string(name));
}

void MlpConfig::validate() const {
  if (hidden.empty()) throw InvalidArgument("mlp: at least one hidden layer is required");
  for (auto h : hidden) {
    if (h < 1) throw InvalidArgument("mlp: hidden layers need at least one unit");
  }
  if (!(learning_rate > 0.0)) throw InvalidArgument("mlp: learning rate must be positive");
  if (epochs < 1) throw InvalidArgument("mlp: epoch limit must be >= 1");
  if (!(l2 >= 0.0)) throw InvalidArgument("mlp: l2 must be nonnegative");
}

MlpModel::MlpModel(std::vector<std::size_t> layer_sizes, Activation activation,
                   std::vector<std::string> class_names)
    : layer_sizes_(std::move(layer_sizes)), activation_(activation),
      class_names_(std::move(class_names)) {
  if (layer_sizes_.size() < 2) throw InvalidArgument("mlp: need input and output layers");
  for (auto s : layer_sizes_) {
    if (s == 0) throw InvalidArgument("mlp: empty layer");
  }
  if (class_names_.size() != layer_sizes_.back()) {
    throw InvalidArgument("mlp: output width must equal class count");
  }
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    offsets_.push_back(offset);
    offset += layer_sizes_[l + 1] * (layer_sizes_[l] + 1);
  }
  params_.assign(offset, 0.0);
}

namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::kRelu: return z > 0.0 ? z : 0.0;
    case Activation::kSigmoid: return sigmoid(z);
    case Activation::kTanh: return std::tanh(z);
  }
  return z;
}

// Derivative expressed through the activation output where that is cheaper.
double activate_derivative(Activation a, double z, double out) {
  switch (a) {
    case Activation::kRelu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::kSigmoid: return out * (1.0 - out);
    case Activation::kTanh: return 1.0 - out * out;
  }
  return 1.0;
}

void softmax_in_place(std::vector<double>& z) {
  const double top = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : z) v /= total;
}

// Pre-activations and outputs of every layer; outputs[0] is the input.
struct ForwardPass {
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> outputs;
};

ForwardPass run_forward(const MlpModel& model, std::span<const double> x) {
  detail::require_width(x, model.layer_sizes().front(), "mlp_forward");
  ForwardPass pass;
  pass.outputs.emplace_back(x.begin(), x.end());
  const std::size_t layers = model.layer_count();
  for (std::size_t l = 0; l < layers; ++l) {
    const auto& in = pass.outputs.back();
    const std::size_t width_out = model.layer_sizes()[l + 1];
    std::vector<double> z(width_out);
    for (std::size_t j = 0; j < width_out; ++j) {
      double s = model.bias(l, j);
      for (std::size_t i = 0; i < in.size(); ++i) s += model.weight(l, j, i) * in[i];
      z[j] = s;
    }
    std::vector<double> a = z;
    if (l + 1 == layers) {
      softmax_in_place(a);
    } else {
      for (double& v : a) v = activate(model.activation(), v);
    }
    pass.pre.push_back(std::move(z));
    pass.outputs.push_back(std::move(a));
  }
  return pass;
}

void gradient_into(const MlpModel& model, std::span<const double> x, std::size_t label,
                   double l2, std::vector<double>& grad) {
  const auto pass = run_forward(model, x);
  const std::size_t layers = model.layer_count();
  if (label >= model.layer_sizes().back()) throw InvalidArgument("mlp: unknown class");
  grad.assign(model.params().size(), 0.0);

  // Softmax + cross-entropy: dL/dz = p - onehot.
  std::vector<double> delta = pass.outputs.back();
  delta[label] -= 1.0;
  for (std::size_t l = layers; l-- > 0;) {
    const auto& in = pass.outputs[l];
    const std::size_t width_out = model.layer_sizes()[l + 1];
    const std::size_t w0 = model.weight_offset(l);
    const std::size_t b0 = model.bias_offset(l);
    for (std::size_t j = 0; j < width_out; ++j) {
      for (std::size_t i = 0; i < in.size(); ++i) {
        grad[w0 + j * in.size() + i] = delta[j] * in[i] + l2 * model.weight(l, j, i);
      }
      grad[b0 + j] = delta[j];
    }
    if (l == 0) break;
    std::vector<double> back(in.size(), 0.0);
    for (std::size_t i = 0; i < in.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < width_out; ++j) s += model.weight(l, j, i) * delta[j];
      back[i] = s * activate_derivative(model.activation(), pass.pre[l - 1][i], in[i]);
    }
    delta = std::move(back);
  }
}

}  // namespace

ProbabilityTable mlp_forward(const MlpModel& model, std::span<const double> x) {
  return run_forward(model, x).outputs.back();
}

ProbabilityTable MlpModel::predict(std::span<const double> x) const { return mlp_forward(*this, x); }

double mlp_loss(const MlpModel& model, std::span<const double> x, std::size_t label, double l2) {
  const auto p = mlp_forward(model, x);
  double penalty = 0.0;
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    const auto first = model.params().begin() + static_cast<std::ptrdiff_t>(model.weight_offset(l));
    const auto last = model.params().begin() + static_cast<std::ptrdiff_t>(model.bias_offset(l));
    for (auto it = first; it != last; ++it) penalty += *it * *it;
  }
  return cross_entropy_loss(p, label) + 0.5 * l2 * penalty;
}

std::vector<double> mlp_gradient(const MlpModel& model, std::span<const double> x,
                                 std::size_t label, double l2) {
  std::vector<double> grad;
  gradient_into(model, x, label, l2, grad);
  return grad;
}

MlpModel train_mlp(const LabeledDataset& data, const MlpConfig& config) {
  config.validate();
  detail::require_trainable(data, "train_mlp");

  std::vector<std::size_t> sizes{data.width()};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(data.class_count());
  MlpModel model(sizes, config.activation, data.class_names());

  SplitMix64 rng(config.seed);
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes[l]));
    for (std::size_t j = 0; j < sizes[l + 1]; ++j) {
      for (std::size_t i = 0; i < sizes[l]; ++i) model.weight(l, j, i) = rng.uniform(-bound, bound);
    }
  }

  std::vector<std::size_t> order(data.size());
  std::vector<double> grad;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (auto row : order) {
      gradient_into(model, data.row(row), data.label(row), config.l2, grad);
      sgd_step(model.params(), grad, config.learning_rate);
    }
  }
  for (double v : model.params()) {
    if (!std::isfinite(v)) throw Error("train_mlp: training diverged (nonfinite parameter)");
  }
  return model;
}

}  // namespace bladeinspect
