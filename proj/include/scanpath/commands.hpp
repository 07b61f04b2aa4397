#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "scanpath/checkpoint.hpp"
#include "scanpath/config.hpp"
#include "scanpath/dataset.hpp"
#include "scanpath/report.hpp"

namespace scanpath {

/// Maps manifest entries to class indices in `classes`; throws Error for a
/// label missing from the list.
std::vector<LabeledSequence> labeled_sequences(const DatasetManifest& manifest,
                                               const std::vector<std::string>& classes);

struct TrainOutcome {
  RunReport report;
  Checkpoint checkpoint;
};

/// Disjoint split, validation holdout from the train half, joint training,
/// then evaluation of the best snapshot on all three parts.
TrainOutcome run_train(const TrainConfig& config);

/// Writes report.json, report.txt and checkpoint.json into `out_dir`.
void write_train_outputs(const std::filesystem::path& out_dir, const TrainOutcome& outcome);

/// Forward-only evaluation of a checkpoint on every entry of `manifest`.
RunReport run_eval(const Checkpoint& checkpoint, const DatasetManifest& manifest);

/// Throws ShapeMismatch when the config describes a different feature or
/// network shape than the checkpoint carries.
void check_compatible(const Checkpoint& checkpoint, const TrainConfig& config);

void write_report(const std::filesystem::path& out_dir, const RunReport& report);

using SweepProgress = std::function<void(const SweepCell& cell, std::size_t index, std::size_t count)>;

/// One training run per (angle set count, set size, repeat). Repeats use
/// different training seeds on the same data split. A failing run is
/// recorded in its cell and the sweep moves on.
SweepResult run_sweep(const SweepSpec& spec, const SweepProgress& progress = {});

void write_sweep_outputs(const std::filesystem::path& out_dir, const SweepResult& result);

/// CSV with columns set_index,bin_index,value,window_count.
void write_features_csv(std::ostream& out, const FeatureTensor& features);

}  // namespace scanpath
