#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bladeinspect/classifiers.hpp"
#include "bladeinspect/dataset.hpp"

namespace bladeinspect {

enum class Activation { kRelu, kSigmoid, kTanh };

const char* to_string(Activation activation);
/// Throws InvalidArgument for an unknown name.
Activation parse_activation(std::string_view name);

struct MlpConfig {
  std::vector<std::size_t> hidden{20};
  Activation activation = Activation::kRelu;
  double learning_rate = 0.01;
  std::size_t epochs = 200;
  double l2 = 1e-4;  // weights only
  std::uint64_t seed = 0;

  void validate() const;
};

/// Fully connected network with softmax output. All parameters live in one
/// flat vector: for each layer, the weights row-major (output unit j, input i),
/// then the biases.
class MlpModel {
 public:
  MlpModel() = default;
  /// Zero-initialized network. layer_sizes = {inputs, hidden..., outputs}.
  MlpModel(std::vector<std::size_t> layer_sizes, Activation activation,
           std::vector<std::string> class_names);

  const std::vector<std::size_t>& layer_sizes() const noexcept { return layer_sizes_; }
  std::size_t layer_count() const noexcept { return layer_sizes_.size() - 1; }
  Activation activation() const noexcept { return activation_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }

  std::span<const double> params() const noexcept { return params_; }
  std::span<double> params() noexcept { return params_; }

  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + layer_sizes_[layer + 1] * layer_sizes_[layer];
  }
  double& weight(std::size_t layer, std::size_t out, std::size_t in) {
    return params_[weight_offset(layer) + out * layer_sizes_[layer] + in];
  }
  double weight(std::size_t layer, std::size_t out, std::size_t in) const {
    return params_[weight_offset(layer) + out * layer_sizes_[layer] + in];
  }
  double& bias(std::size_t layer, std::size_t out) { return params_[bias_offset(layer) + out]; }
  double bias(std::size_t layer, std::size_t out) const { return params_[bias_offset(layer) + out]; }

  ProbabilityTable predict(std::span<const double> x) const;

 private:
  std::vector<std::size_t> layer_sizes_;
  Activation activation_ = Activation::kRelu;
  std::vector<std::string> class_names_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

ProbabilityTable mlp_forward(const MlpModel& model, std::span<const double> x);

/// Cross-entropy of one sample plus (l2/2) * sum of squared weights.
double mlp_loss(const MlpModel& model, std::span<const double> x, std::size_t label, double l2);

/// Backpropagated gradient of mlp_loss, laid out like MlpModel::params().
std::vector<double> mlp_gradient(const MlpModel& model, std::span<const double> x,
                                 std::size_t label, double l2);

/// Per-sample SGD. Weights start uniform in +-1/sqrt(fan_in) and rows are
/// reshuffled every epoch, both from one SplitMix64 stream seeded by config.seed.
MlpModel train_mlp(const LabeledDataset& data, const MlpConfig& config = {});

}  // namespace bladeinspect
