#include "scanpath/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "scanpath/error.hpp"

namespace scanpath {

std::string_view to_string(Activation) { return "relu"; }

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::ReLU;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

Mlp::Mlp(NetworkSpec spec) : Mlp(std::move(spec), true) {}

Mlp Mlp::zeros(NetworkSpec spec) { return Mlp(std::move(spec), false); }

Mlp::Mlp(NetworkSpec spec, bool random_init) : spec_(std::move(spec)) {
  if (spec_.input_dim == 0) throw ConfigError("network input_dim must be positive");
  if (spec_.num_classes < 2) throw ConfigError("network needs >= 2 classes");
  dims_.push_back(spec_.input_dim);
  for (auto h : spec_.hidden_layers) {
    if (h == 0) throw ConfigError("hidden layer width must be positive");
    dims_.push_back(h);
  }
  dims_.push_back(spec_.num_classes);

  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    offsets_.push_back(total);
    total += dims_[l] * dims_[l + 1] + dims_[l + 1];
  }
  params_.assign(total, 0.0);
  if (!random_init) return;

  std::mt19937_64 rng(spec_.weight_init_seed);
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / static_cast<double>(dims_[l])));
    const auto n = dims_[l] * dims_[l + 1];
    for (std::size_t i = 0; i < n; ++i) params_[offsets_[l] + i] = dist(rng);
  }
}

void Mlp::set_parameters(std::span<const double> values) {
  if (values.size() != params_.size()) throw ShapeMismatch("parameter count mismatch");
  std::copy(values.begin(), values.end(), params_.begin());
}

double& Mlp::weight(std::size_t layer, std::size_t out, std::size_t in) {
  return params_[weight_offset(layer) + out * dims_[layer] + in];
}

double& Mlp::bias(std::size_t layer, std::size_t out) {
  return params_[bias_offset(layer) + out];
}

std::vector<double> softmax(std::span<const double> logits) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - peak);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

double cross_entropy(std::span<const double> probabilities, std::size_t true_class) {
  return -std::log(std::max(probabilities[true_class], std::numeric_limits<double>::min()));
}

ForwardCache Mlp::forward(std::span<const double> input) const {
  if (input.size() != spec_.input_dim) {
    throw ShapeMismatch("network expects " + std::to_string(spec_.input_dim) +
                        " inputs, got " + std::to_string(input.size()));
  }
  ForwardCache cache;
  std::vector<double> a(input.begin(), input.end());
  const auto layers = num_layers();
  for (std::size_t l = 0; l < layers; ++l) {
    const auto in = dims_[l];
    const auto out = dims_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    std::vector<double> z(out);
    for (std::size_t o = 0; o < out; ++o) {
      double acc = b[o];
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) acc += row[i] * a[i];
      z[o] = acc;
    }
    cache.layer_inputs.push_back(std::move(a));
    if (l + 1 < layers) {
      for (auto& v : z) v = std::max(v, 0.0);
    }
    a = std::move(z);
  }
  cache.logits = std::move(a);
  cache.probabilities = softmax(cache.logits);
  return cache;
}

NetGradients Mlp::backward(const ForwardCache& cache, std::size_t true_class) const {
  if (cache.empty() || cache.layer_inputs.size() != num_layers() ||
      cache.probabilities.size() != spec_.num_classes) {
    throw Error("network backward called without a matching forward pass");
  }
  if (true_class >= spec_.num_classes) throw Error("class index out of range");

  NetGradients g;
  g.parameters.assign(params_.size(), 0.0);
  std::vector<double> delta = cache.probabilities;
  delta[true_class] -= 1.0;

  for (std::size_t l = num_layers(); l-- > 0;) {
    const auto in = dims_[l];
    const auto out = dims_[l + 1];
    const auto& a = cache.layer_inputs[l];
    const double* w = params_.data() + weight_offset(l);
    double* gw = g.parameters.data() + weight_offset(l);
    double* gb = g.parameters.data() + bias_offset(l);
    std::vector<double> prev(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      gb[o] = d;
      if (d == 0.0) continue;
      const double* row = w + o * in;
      double* grow = gw + o * in;
      for (std::size_t i = 0; i < in; ++i) {
        grow[i] = d * a[i];
        prev[i] += d * row[i];
      }
    }
    if (l > 0) {
      // a is the ReLU output of the previous layer.
      for (std::size_t i = 0; i < in; ++i) {
        if (a[i] <= 0.0) prev[i] = 0.0;
      }
    }
    delta = std::move(prev);
  }
  g.input = std::move(delta);
  return g;
}

void Mlp::permute_inputs(std::span<const std::size_t> order) {
  const auto in = dims_[0];
  if (order.size() != in) throw ShapeMismatch("permutation length mismatch");
  const auto out = dims_[1];
  std::vector<double> old(params_.begin(), params_.begin() + static_cast<std::ptrdiff_t>(in * out));
  for (std::size_t o = 0; o < out; ++o) {
    for (std::size_t i = 0; i < in; ++i) params_[o * in + i] = old[o * in + order[i]];
  }
}

SgdMomentum::SgdMomentum(std::size_t parameter_count, double momentum)
    : momentum_(momentum), velocity_(parameter_count, 0.0) {}

void SgdMomentum::step(std::span<double> parameters, std::span<const double> gradient,
                       double lr) {
  if (parameters.size() != velocity_.size() || gradient.size() != velocity_.size()) {
    throw ShapeMismatch("optimizer parameter count mismatch");
  }
  for (std::size_t i = 0; i < velocity_.size(); ++i) {
    velocity_[i] = momentum_ * velocity_[i] - lr * gradient[i];
    parameters[i] += velocity_[i];
  }
}

}  // namespace scanpath
