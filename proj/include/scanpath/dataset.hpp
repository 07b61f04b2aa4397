#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scanpath/gaze.hpp"

namespace scanpath {

enum class ClassTarget { Subject, Stimulus };

std::string_view to_string(ClassTarget target);
ClassTarget parse_class_target(std::string_view name);

struct ManifestEntry {
  std::filesystem::path path;  // empty for in-memory recordings
  GazeRecording recording;

  const std::string& subject_id() const { return recording.subject_id(); }
  const std::string& stimulus_id() const { return recording.stimulus_id(); }
};

/// Labeled recordings plus the field used as class label. The field not
/// used as label is the grouping key for disjoint splitting.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  ClassTarget class_target = ClassTarget::Stimulus;

  std::size_t size() const { return entries.size(); }
  const std::string& label_of(const ManifestEntry& e) const;
  const std::string& group_of(const ManifestEntry& e) const;
  /// Distinct labels, sorted.
  std::vector<std::string> classes() const;
};

/// Parses `path,subject_id,stimulus_id` rows (optional header) with paths
/// relative to the manifest's directory, then loads and validates every
/// referenced recording. All per-file failures are collected into a single
/// ParseError.
DatasetManifest load_manifest(const std::filesystem::path& path, ClassTarget target);

void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, const GazeRecording*>>& rows);

struct ManifestSplit {
  DatasetManifest train;
  DatasetManifest test;
};

/// Partitions the grouping key (subjects when classifying stimuli and vice
/// versa) so that no group appears on both sides and every class appears on
/// both sides. `fraction` is the share of groups sent to train.
ManifestSplit split_disjoint(const DatasetManifest& manifest, ClassTarget target,
                             double fraction, std::uint64_t seed);

/// Random recording-level holdout of round(fraction * size) entries; both
/// halves keep manifest order.
ManifestSplit random_holdout(const DatasetManifest& manifest, double fraction,
                             std::uint64_t seed);

}  // namespace scanpath
