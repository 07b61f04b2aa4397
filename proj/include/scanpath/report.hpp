#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scanpath/training.hpp"

namespace scanpath {

struct SplitScore {
  std::string name;  // train, validation, test or eval
  std::size_t correct = 0;
  std::size_t total = 0;

  double accuracy() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  }
};

struct ClassScore {
  std::string label;
  double precision = 0.0;  // 0 when the class was never predicted
  double recall = 0.0;     // 0 when the class has no samples
  std::size_t support = 0;
};

struct RunReport {
  std::string command;
  nlohmann::json config;  // resolved configuration or eval inputs
  std::uint64_t seed = 0;
  std::vector<std::string> classes;
  std::vector<SplitScore> splits;
  std::string per_class_split;  // which split per_class was computed on
  std::vector<ClassScore> per_class;
  std::size_t best_epoch = 0;
  std::vector<EpochRecord> history;
  double wall_clock_seconds = 0.0;

  const SplitScore* split(const std::string& name) const;
};

std::vector<ClassScore> class_scores(const std::vector<std::string>& classes,
                                     std::span<const std::size_t> truth,
                                     std::span<const std::size_t> predicted);

nlohmann::json to_json(const RunReport& report);
/// Everything except wall_clock_seconds, which is the one field allowed to
/// differ between otherwise identical runs.
nlohmann::json reproducible_json(const RunReport& report);
std::string render_table(const RunReport& report);

struct SweepCell {
  std::size_t num_sets = 0;
  std::size_t set_size = 0;
  std::vector<double> validation_accuracies;  // one per finished repeat
  std::vector<std::string> errors;            // one per failed repeat

  bool failed() const { return validation_accuracies.empty(); }
  double mean() const;
};

struct SweepResult {
  nlohmann::json base_config;
  std::size_t repeats = 0;
  std::vector<SweepCell> cells;
  std::optional<std::size_t> best;  // highest mean; earliest cell on ties
};

nlohmann::json to_json(const SweepResult& result);
std::string render_sweep_table(const SweepResult& result);

/// Two-decimal accuracy as shown in tables.
std::string format_accuracy(double accuracy);

}  // namespace scanpath
