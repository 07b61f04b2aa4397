#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scanpath/angle_feature.hpp"
#include "scanpath/gaze.hpp"
#include "scanpath/mlp.hpp"

namespace scanpath {

struct TrainSchedule {
  double lr_initial = 1e-3;
  double lr_reduced = 1e-4;
  std::size_t switch_epoch = 50;
  std::size_t total_epochs = 100;
  double momentum = 0.9;
  std::size_t batch_size = 32;
  double validation_fraction = 0.2;

  /// total_epochs = 0 is accepted as "return the initial state".
  void validate() const;
  double learning_rate(std::size_t epoch) const {
    return epoch < switch_epoch ? lr_initial : lr_reduced;
  }

  bool operator==(const TrainSchedule&) const = default;
};

/// How the feature layer is trained alongside the network.
struct RangeTraining {
  double range_lr = 1e-3;  // 0 freezes the bank
  SignMode sign_mode = SignMode::PaperLiteral;
  bool renormalize_gradient = false;

  bool operator==(const RangeTraining&) const = default;
};

struct LabeledSequence {
  AngleSequence angles;
  std::size_t label = 0;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double learning_rate = 0.0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double validation_loss = 0.0;
  double validation_accuracy = 0.0;
};

struct TrainResult {
  AngleSetBank bank;
  Mlp network;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;  // 0 means the untrained initial state
  double best_validation_accuracy = 0.0;
};

struct Evaluation {
  double mean_loss = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<std::size_t> predictions;

  double accuracy() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  }
};

/// Forward-only evaluation.
Evaluation evaluate(const AngleSetBank& bank, const Mlp& network,
                    std::span<const LabeledSequence> data);

/// The bin gradient handed to the feature layer for one recording: the
/// network's input gradient reshaped per set, optionally pushed through the
/// normalization Jacobian, and negated under PaperLiteral so that a positive
/// value means "this bin should grow".
BinGradient feature_gradient(const FeatureTensor& features, std::span<const double> input_grad,
                             const RangeTraining& ranges);

/// Joint minibatch training. Per batch: feature forward, network forward and
/// backward for every recording, fixed-order accumulation of weight and range
/// gradients, then one optimizer step and one range update. Returns the
/// snapshot with the best validation accuracy (earliest on ties).
TrainResult train(AngleSetBank bank, Mlp network, std::span<const LabeledSequence> train_set,
                  std::span<const LabeledSequence> validation_set,
                  const TrainSchedule& schedule, const RangeTraining& ranges,
                  std::uint64_t seed);

}  // namespace scanpath
