#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scanpath/angle_feature.hpp"
#include "scanpath/dataset.hpp"
#include "scanpath/synthetic.hpp"
#include "scanpath/training.hpp"

namespace scanpath {

struct FeatureConfig {
  std::size_t num_sets = 4096;
  std::size_t set_size = 4;
  DegreeInterval init_range{10.0, 60.0};
  double range_min = kDefaultRangeMin;
  RangeTraining training;

  bool operator==(const FeatureConfig&) const = default;
};

/// Exactly one of `manifest` and `synthetic` is set.
struct DataConfig {
  std::optional<std::filesystem::path> manifest;
  std::optional<SyntheticSpec> synthetic;
  std::uint64_t synthetic_seed = 0;
};

struct TrainConfig {
  DataConfig data;
  ClassTarget target = ClassTarget::Stimulus;
  double train_fraction = 0.5;  // share of groups in the training half
  FeatureConfig features;
  std::vector<std::size_t> hidden_layers{256, 128};
  TrainSchedule schedule;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> split_seed;  // defaults to seed

  std::uint64_t resolved_split_seed() const { return split_seed.value_or(seed); }
  void validate() const;
};

struct SweepSpec {
  std::vector<std::size_t> angle_set_counts;
  std::vector<std::size_t> set_sizes;
  std::size_t repeats = 1;
  TrainConfig base;

  void validate() const;
};

/// Independent sub-seed for one consumer of a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

std::string_view to_string(SignMode mode);
SignMode parse_sign_mode(std::string_view name);

// Relative manifest paths are resolved against `base_dir`. Unknown keys are
// rejected so that typos do not silently fall back to defaults.
TrainConfig parse_train_config(const nlohmann::json& j,
                               const std::filesystem::path& base_dir = {});
TrainConfig load_train_config(const std::filesystem::path& path);
nlohmann::json to_json(const TrainConfig& config);

SyntheticSpec parse_synthetic_spec(const nlohmann::json& j);
nlohmann::json to_json(const SyntheticSpec& spec);

/// `base` may be an inline config object or a path to a config file.
SweepSpec parse_sweep_spec(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
SweepSpec load_sweep_spec(const std::filesystem::path& path);

nlohmann::json load_json_file(const std::filesystem::path& path);

/// Loads the configured dataset with labels taken from `config.target`.
DatasetManifest load_dataset(const TrainConfig& config);

/// Text for `--help`, listing every config key with its default.
std::string config_reference();

}  // namespace scanpath
