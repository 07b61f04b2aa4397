#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "scanpath/bank_io.hpp"
#include "scanpath/commands.hpp"
#include "scanpath/error.hpp"

namespace fs = std::filesystem;
using namespace scanpath;

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
};

void add_common(CLI::App* cmd, CommonOptions& o, bool config_required, const char* seed_help) {
  auto* c = cmd->add_option("--config", o.config, "JSON config file");
  if (config_required) c->required();
  cmd->add_option("--seed", o.seed, seed_help);
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
}

int cmd_train(const CommonOptions& o) {
  auto config = load_train_config(o.config);
  if (o.seed) config.seed = *o.seed;
  const auto outcome = run_train(config);
  write_train_outputs(o.out, outcome);
  std::cout << render_table(outcome.report) << "wrote " << (fs::path(o.out) / "report.json").string()
            << " and checkpoint.json\n";
  return 0;
}

int cmd_eval(const CommonOptions& o, const std::string& checkpoint_path,
             const std::string& manifest_path) {
  const auto checkpoint = load_checkpoint(checkpoint_path);
  if (!o.config.empty()) check_compatible(checkpoint, load_train_config(o.config));
  const auto manifest = load_manifest(manifest_path, checkpoint.target);
  auto report = run_eval(checkpoint, manifest);
  report.config["checkpoint"] = checkpoint_path;
  report.config["manifest"] = manifest_path;
  write_report(o.out, report);
  std::cout << render_table(report);
  return 0;
}

int cmd_sweep(const CommonOptions& o) {
  auto spec = load_sweep_spec(o.config);
  if (o.seed) spec.base.seed = *o.seed;
  const auto result = run_sweep(spec, [](const SweepCell& cell, std::size_t i, std::size_t n) {
    std::cerr << "[" << i + 1 << "/" << n << "] " << cell.num_sets << " sets, size "
              << cell.set_size << ": "
              << (cell.failed() ? "failed" : format_accuracy(cell.mean())) << "\n";
  });
  write_sweep_outputs(o.out, result);
  std::cout << render_sweep_table(result);
  return 0;
}

int cmd_features(const CommonOptions& o, const std::string& checkpoint_path,
                 const std::string& bank_path, const std::string& recording_path) {
  std::optional<AngleSetBank> bank;
  if (!checkpoint_path.empty()) {
    bank = load_checkpoint(checkpoint_path).bank;
  } else if (!bank_path.empty()) {
    bank = load_bank(bank_path);
  } else if (!o.config.empty()) {
    auto config = load_train_config(o.config);
    if (o.seed) config.seed = *o.seed;
    const auto& f = config.features;
    bank = init_bank(f.num_sets, f.set_size, derive_seed(config.seed, 1), f.init_range,
                     f.range_min);
  } else {
    throw ConfigError("features needs --checkpoint, --bank or --config");
  }
  const auto recording = read_gaze_csv(recording_path, "", "");
  const auto features = forward(*bank, compute_angles(recording)).features;
  fs::create_directories(o.out);
  const auto out_path = fs::path(o.out) / "features.csv";
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot write " + out_path.string());
  write_features_csv(out, features);
  if (features.sequence_too_short) {
    std::cerr << "warning: " << recording_path << " has fewer angles than the set size; "
              << "all feature rows are zero\n";
  }
  std::cout << "wrote " << out_path.string() << " (" << features.num_sets << " x "
            << features.bins << ")\n";
  return 0;
}

int cmd_synth(const CommonOptions& o) {
  auto config = load_train_config(o.config);
  if (!config.data.synthetic) throw ConfigError("synth needs a config with data.synthetic");
  if (o.seed) config.data.synthetic_seed = *o.seed;
  const auto manifest = load_dataset(config);

  const fs::path out(o.out);
  fs::create_directories(out / "recordings");
  std::vector<std::pair<std::string, const GazeRecording*>> rows;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    std::ostringstream name;
    name << "recordings/rec_" << std::setw(5) << std::setfill('0') << i << ".csv";
    names.push_back(name.str());
    write_gaze_csv(out / names.back(), manifest.entries[i].recording);
  }
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    rows.emplace_back(names[i], &manifest.entries[i].recording);
  }
  write_manifest(out / "manifest.csv", rows);
  std::cout << "wrote " << rows.size() << " recordings and " << (out / "manifest.csv").string()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scanpath classification with trainable angle-range histogram features"};
  app.require_subcommand(1);
  app.footer(config_reference());

  CommonOptions train_opts, eval_opts, sweep_opts, feature_opts, synth_opts;
  std::string checkpoint_path, manifest_path, bank_path, recording_path;

  auto* train = app.add_subcommand("train", "train on a dataset, write report and checkpoint");
  add_common(train, train_opts, true, "overrides the config's seed");

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on a manifest");
  add_common(eval, eval_opts, false,
             "accepted for a uniform interface; evaluation uses no randomness");
  eval->add_option("--checkpoint", checkpoint_path, "checkpoint.json from train")->required();
  eval->add_option("--manifest", manifest_path, "manifest CSV to evaluate on")->required();

  auto* sweep = app.add_subcommand("sweep", "grid over angle set counts and set sizes");
  add_common(sweep, sweep_opts, true, "overrides the base config's seed");

  auto* features = app.add_subcommand("features", "dump the feature tensor of one recording");
  add_common(features, feature_opts, false, "seed for a fresh bank built from --config");
  auto* ck = features->add_option("--checkpoint", checkpoint_path, "take the bank from a checkpoint");
  features->add_option("--bank", bank_path, "bank text file")->excludes(ck);
  features->add_option("--recording", recording_path, "gaze CSV")->required();

  auto* synth = app.add_subcommand("synth", "write a synthetic dataset as gaze CSVs plus manifest");
  add_common(synth, synth_opts, true, "overrides data.synthetic.seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return cmd_train(train_opts);
    if (*eval) return cmd_eval(eval_opts, checkpoint_path, manifest_path);
    if (*sweep) return cmd_sweep(sweep_opts);
    if (*features) return cmd_features(feature_opts, checkpoint_path, bank_path, recording_path);
    if (*synth) return cmd_synth(synth_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
