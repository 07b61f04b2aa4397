#include "scanpath/commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "scanpath/error.hpp"
#include "scanpath/text.hpp"

namespace scanpath {

using nlohmann::json;

std::vector<LabeledSequence> labeled_sequences(const DatasetManifest& manifest,
                                               const std::vector<std::string>& classes) {
  std::vector<LabeledSequence> out;
  out.reserve(manifest.entries.size());
  for (const auto& e : manifest.entries) {
    const auto& label = manifest.label_of(e);
    const auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) {
      throw Error(e.path.string() + ": class '" + label + "' is not known to the model");
    }
    try {
      out.push_back({compute_angles(e.recording), static_cast<std::size_t>(it - classes.begin())});
    } catch (const RecordingTooShort& err) {
      throw RecordingTooShort(e.path.string() + ": " + err.what());
    }
  }
  return out;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SplitScore score(std::string name, const Evaluation& e) {
  return {std::move(name), e.correct, e.total};
}

std::vector<std::size_t> labels_of(const std::vector<LabeledSequence>& data) {
  std::vector<std::size_t> out;
  out.reserve(data.size());
  for (const auto& s : data) out.push_back(s.label);
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

TrainOutcome run_train(const TrainConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  const auto manifest = load_dataset(config);
  const auto classes = manifest.classes();
  const auto split_seed = config.resolved_split_seed();
  const auto split = split_disjoint(manifest, config.target, config.train_fraction, split_seed);
  const auto holdout =
      random_holdout(split.train, config.schedule.validation_fraction, derive_seed(split_seed, 1));

  const auto train_set = labeled_sequences(holdout.train, classes);
  const auto validation_set = labeled_sequences(holdout.test, classes);
  const auto test_set = labeled_sequences(split.test, classes);

  const auto& f = config.features;
  auto bank = init_bank(f.num_sets, f.set_size, derive_seed(config.seed, 1), f.init_range,
                        f.range_min);
  Mlp network(NetworkSpec{bank.feature_size(), config.hidden_layers, classes.size(),
                          Activation::ReLU, derive_seed(config.seed, 2)});
  auto result = train(std::move(bank), std::move(network), train_set, validation_set,
                      config.schedule, f.training, derive_seed(config.seed, 3));

  const auto on_train = evaluate(result.bank, result.network, train_set);
  const auto on_validation = evaluate(result.bank, result.network, validation_set);
  const auto on_test = evaluate(result.bank, result.network, test_set);

  RunReport report;
  report.command = "train";
  report.config = to_json(config);
  report.seed = config.seed;
  report.classes = classes;
  report.splits = {score("train", on_train), score("validation", on_validation),
                   score("test", on_test)};
  report.per_class_split = "test";
  report.per_class = class_scores(classes, labels_of(test_set), on_test.predictions);
  report.best_epoch = result.best_epoch;
  report.history = result.history;

  Checkpoint checkpoint{std::move(result.bank),
                        std::move(result.network),
                        config.target,
                        classes,
                        config.schedule,
                        f.training,
                        result.best_epoch,
                        on_validation.accuracy()};
  report.wall_clock_seconds = seconds_since(start);
  return {std::move(report), std::move(checkpoint)};
}

void write_report(const std::filesystem::path& out_dir, const RunReport& report) {
  std::filesystem::create_directories(out_dir);
  write_text(out_dir / "report.json", to_json(report).dump(2) + "\n");
  write_text(out_dir / "report.txt", render_table(report));
}

void write_train_outputs(const std::filesystem::path& out_dir, const TrainOutcome& outcome) {
  write_report(out_dir, outcome.report);
  save_checkpoint(out_dir / "checkpoint.json", outcome.checkpoint);
}

void check_compatible(const Checkpoint& checkpoint, const TrainConfig& config) {
  const auto& bank = checkpoint.bank;
  const auto& f = config.features;
  if (bank.num_sets() != f.num_sets || bank.set_size() != f.set_size) {
    throw ShapeMismatch("checkpoint bank has " + std::to_string(bank.num_sets()) +
                        " sets of size " + std::to_string(bank.set_size()) +
                        ", config asks for " + std::to_string(f.num_sets) + " sets of size " +
                        std::to_string(f.set_size));
  }
  if (checkpoint.network.spec().hidden_layers != config.hidden_layers) {
    throw ShapeMismatch("checkpoint network hidden layers differ from the config");
  }
}

RunReport run_eval(const Checkpoint& checkpoint, const DatasetManifest& manifest) {
  checkpoint.validate();
  const auto start = std::chrono::steady_clock::now();
  if (manifest.class_target != checkpoint.target) {
    throw ConfigError("manifest labels by " + std::string(to_string(manifest.class_target)) +
                      " but the checkpoint classifies " +
                      std::string(to_string(checkpoint.target)));
  }
  const auto data = labeled_sequences(manifest, checkpoint.classes);
  const auto result = evaluate(checkpoint.bank, checkpoint.network, data);

  RunReport report;
  report.command = "eval";
  report.config = {{"target", to_string(checkpoint.target)},
                   {"num_sets", checkpoint.bank.num_sets()},
                   {"set_size", checkpoint.bank.set_size()},
                   {"hidden_layers", checkpoint.network.spec().hidden_layers},
                   {"checkpoint_epoch", checkpoint.epoch},
                   {"checkpoint_validation_accuracy", checkpoint.validation_accuracy},
                   {"recordings", manifest.entries.size()}};
  report.seed = checkpoint.bank.seed();
  report.classes = checkpoint.classes;
  report.splits = {score("eval", result)};
  report.per_class_split = "eval";
  report.per_class = class_scores(checkpoint.classes, labels_of(data), result.predictions);
  report.best_epoch = checkpoint.epoch;
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

SweepResult run_sweep(const SweepSpec& spec, const SweepProgress& progress) {
  spec.validate();
  SweepResult result;
  result.base_config = to_json(spec.base);
  result.repeats = spec.repeats;
  const std::size_t count = spec.angle_set_counts.size() * spec.set_sizes.size();
  for (auto num_sets : spec.angle_set_counts) {
    for (auto set_size : spec.set_sizes) {
      SweepCell cell{num_sets, set_size, {}, {}};
      for (std::size_t r = 0; r < spec.repeats; ++r) {
        auto config = spec.base;
        config.features.num_sets = num_sets;
        config.features.set_size = set_size;
        config.split_seed = spec.base.resolved_split_seed();
        config.seed = spec.base.seed + r;
        try {
          const auto outcome = run_train(config);
          cell.validation_accuracies.push_back(outcome.report.split("validation")->accuracy());
        } catch (const std::exception& e) {
          cell.errors.push_back("repeat " + std::to_string(r) + ": " + e.what());
        }
      }
      result.cells.push_back(std::move(cell));
      if (progress) progress(result.cells.back(), result.cells.size() - 1, count);
    }
  }
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const auto& c = result.cells[i];
    if (c.failed()) continue;
    if (!result.best || c.mean() > result.cells[*result.best].mean()) result.best = i;
  }
  return result;
}

void write_sweep_outputs(const std::filesystem::path& out_dir, const SweepResult& result) {
  std::filesystem::create_directories(out_dir);
  write_text(out_dir / "sweep.json", to_json(result).dump(2) + "\n");
  write_text(out_dir / "sweep.txt", render_sweep_table(result));
}

void write_features_csv(std::ostream& out, const FeatureTensor& features) {
  out << "set_index,bin_index,value,window_count\n";
  for (std::size_t s = 0; s < features.num_sets; ++s) {
    for (std::size_t b = 0; b < features.bins; ++b) {
      out << s << ',' << b << ',' << text::format_double(features.at(s, b)) << ','
          << features.window_counts[s] << '\n';
    }
  }
}

}  // namespace scanpath
