#include "scanpath/training.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "scanpath/error.hpp"

namespace scanpath {

void TrainSchedule::validate() const {
  if (!(lr_initial > 0.0 && lr_reduced > 0.0 && lr_reduced <= lr_initial)) {
    throw ConfigError("learning rates must satisfy 0 < lr_reduced <= lr_initial");
  }
  if (total_epochs > 0 && !(switch_epoch > 0 && switch_epoch < total_epochs)) {
    throw ConfigError("switch_epoch must lie strictly between 0 and total_epochs");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must lie in [0, 1)");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("validation_fraction must lie in (0, 1)");
  }
}

Evaluation evaluate(const AngleSetBank& bank, const Mlp& network,
                    std::span<const LabeledSequence> data) {
  Evaluation ev;
  ev.total = data.size();
  ev.predictions.reserve(data.size());
  double loss = 0.0;
  for (const auto& item : data) {
    const auto features = forward(bank, item.angles).features;
    const auto probs = network.predict(features.values);
    const auto pred = static_cast<std::size_t>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
    ev.predictions.push_back(pred);
    if (pred == item.label) ++ev.correct;
    loss += cross_entropy(probs, item.label);
  }
  ev.mean_loss = data.empty() ? 0.0 : loss / static_cast<double>(data.size());
  return ev;
}

BinGradient feature_gradient(const FeatureTensor& features, std::span<const double> input_grad,
                             const RangeTraining& ranges) {
  BinGradient g{features.num_sets, features.bins, {input_grad.begin(), input_grad.end()}};
  if (ranges.renormalize_gradient) g = renormalize_gradient(features, g);
  if (ranges.sign_mode == SignMode::PaperLiteral) {
    for (auto& v : g.values) v = -v;
  }
  return g;
}

TrainResult train(AngleSetBank bank, Mlp network, std::span<const LabeledSequence> train_set,
                  std::span<const LabeledSequence> validation_set,
                  const TrainSchedule& schedule, const RangeTraining& ranges,
                  std::uint64_t seed) {
  schedule.validate();
  if (network.spec().input_dim != bank.feature_size()) {
    throw ShapeMismatch("network input_dim " + std::to_string(network.spec().input_dim) +
                        " does not match bank output " + std::to_string(bank.feature_size()));
  }
  TrainResult result{bank, network, {}, 0, 0.0};
  if (schedule.total_epochs == 0) return result;
  if (train_set.empty()) throw Error("training set is empty");
  if (validation_set.empty()) throw Error("validation set is empty");
  std::set<std::size_t> labels;
  for (const auto& item : train_set) {
    if (item.label >= network.spec().num_classes) throw Error("label out of range");
    labels.insert(item.label);
  }
  if (labels.size() < 2) throw Error("training split contains a single class");

  const bool train_ranges = ranges.range_lr != 0.0;
  SgdMomentum optimizer(network.parameter_count(), schedule.momentum);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> grad_sum(network.parameter_count());
  bool have_best = false;

  for (std::size_t epoch = 0; epoch < schedule.total_epochs; ++epoch) {
    const double lr = schedule.learning_rate(epoch);
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;

    for (std::size_t start = 0; start < order.size(); start += schedule.batch_size) {
      const auto end = std::min(order.size(), start + schedule.batch_size);
      const double scale = 1.0 / static_cast<double>(end - start);
      std::fill(grad_sum.begin(), grad_sum.end(), 0.0);
      bank.reset_updates();

      for (std::size_t b = start; b < end; ++b) {
        const auto& item = train_set[order[b]];
        const auto fwd = forward(bank, item.angles);
        const auto cache = network.forward(fwd.features.values);
        const auto& probs = cache.probabilities;
        loss_sum += cross_entropy(probs, item.label);
        if (static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) -
                                     probs.begin()) == item.label) {
          ++correct;
        }
        auto grads = network.backward(cache, item.label);
        for (std::size_t i = 0; i < grad_sum.size(); ++i) grad_sum[i] += scale * grads.parameters[i];
        if (train_ranges) {
          for (auto& v : grads.input) v *= scale;
          accumulate_range_updates(bank, fwd.trace,
                                   feature_gradient(fwd.features, grads.input, ranges));
        }
      }
      optimizer.step(network.parameters(), grad_sum, lr);
      if (train_ranges) {
        apply_range_updates(bank, ranges.range_lr, ranges.sign_mode);
      } else {
        bank.reset_updates();
      }
    }

    const auto val = evaluate(bank, network, validation_set);
    EpochRecord rec;
    rec.epoch = epoch + 1;
    rec.learning_rate = lr;
    rec.train_loss = loss_sum / static_cast<double>(order.size());
    rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(order.size());
    rec.validation_loss = val.mean_loss;
    rec.validation_accuracy = val.accuracy();
    result.history.push_back(rec);

    if (!have_best || rec.validation_accuracy > result.best_validation_accuracy) {
      have_best = true;
      result.bank = bank;
      result.network = network;
      result.best_epoch = rec.epoch;
      result.best_validation_accuracy = rec.validation_accuracy;
    }
  }
  return result;
}

}  // namespace scanpath
