#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "scanpath/angle_feature.hpp"
#include "scanpath/dataset.hpp"
#include "scanpath/mlp.hpp"
#include "scanpath/training.hpp"

namespace scanpath {

inline constexpr int kCheckpointVersion = 1;

/// Everything needed to run the trained model again: the bank, the network,
/// the label set and where the snapshot came from.
struct Checkpoint {
  AngleSetBank bank;
  Mlp network;
  ClassTarget target = ClassTarget::Stimulus;
  std::vector<std::string> classes;  // index = network output
  TrainSchedule schedule;
  RangeTraining ranges;
  std::size_t epoch = 0;
  double validation_accuracy = 0.0;

  /// Throws ShapeMismatch if bank, network and classes disagree.
  void validate() const;
};

std::string checkpoint_to_string(const Checkpoint& checkpoint);
/// Throws ParseError for malformed or truncated input.
Checkpoint checkpoint_from_string(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace scanpath
