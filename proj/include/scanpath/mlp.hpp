#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace scanpath {

enum class Activation { ReLU };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

struct NetworkSpec {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden_layers;
  std::size_t num_classes = 2;
  Activation activation = Activation::ReLU;
  std::uint64_t weight_init_seed = 0;

  bool operator==(const NetworkSpec&) const = default;
};

/// Activations kept from a forward call; backward needs them.
struct ForwardCache {
  std::vector<std::vector<double>> layer_inputs;  // input to each dense layer
  std::vector<double> logits;
  std::vector<double> probabilities;

  bool empty() const { return layer_inputs.empty(); }
};

struct NetGradients {
  std::vector<double> parameters;  // same layout as Mlp::parameters()
  std::vector<double> input;       // d loss / d input feature
};

/// Dense ReLU layers followed by a linear layer and softmax. Parameters are
/// stored flat, layer by layer, each as an out x in row-major weight block
/// followed by the bias vector.
class Mlp {
 public:
  /// He-normal weights drawn from spec.weight_init_seed, zero biases.
  explicit Mlp(NetworkSpec spec);

  static Mlp zeros(NetworkSpec spec);

  const NetworkSpec& spec() const { return spec_; }
  std::size_t num_layers() const { return dims_.size() - 1; }
  std::size_t parameter_count() const { return params_.size(); }
  std::span<const double> parameters() const { return params_; }
  std::span<double> parameters() { return params_; }
  void set_parameters(std::span<const double> values);

  double& weight(std::size_t layer, std::size_t out, std::size_t in);
  double& bias(std::size_t layer, std::size_t out);

  ForwardCache forward(std::span<const double> input) const;
  std::vector<double> predict(std::span<const double> input) const {
    return forward(input).probabilities;
  }

  /// Gradients of the cross-entropy loss of `true_class`. Throws if the cache
  /// did not come from a forward call.
  NetGradients backward(const ForwardCache& cache, std::size_t true_class) const;

  /// Permutes input columns of the first layer: new column i reads old
  /// column order[i].
  void permute_inputs(std::span<const std::size_t> order);

  bool operator==(const Mlp&) const = default;

 private:
  Mlp(NetworkSpec spec, bool random_init);
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + dims_[layer] * dims_[layer + 1];
  }

  NetworkSpec spec_;
  std::vector<std::size_t> dims_;     // input, hidden..., classes
  std::vector<std::size_t> offsets_;  // start of each layer's block
  std::vector<double> params_;
};

std::vector<double> softmax(std::span<const double> logits);
double cross_entropy(std::span<const double> probabilities, std::size_t true_class);

/// SGD with classical momentum: v = mu * v - lr * g; w += v.
class SgdMomentum {
 public:
  SgdMomentum(std::size_t parameter_count, double momentum);

  void step(std::span<double> parameters, std::span<const double> gradient, double lr);
  std::span<const double> velocity() const { return velocity_; }

 private:
  double momentum_;
  std::vector<double> velocity_;
};

}  // namespace scanpath
