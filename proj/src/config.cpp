#include "scanpath/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "scanpath/error.hpp"

namespace scanpath {

using nlohmann::json;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string_view to_string(SignMode mode) {
  return mode == SignMode::PaperLiteral ? "paper_literal" : "descent";
}

SignMode parse_sign_mode(std::string_view name) {
  if (name == "paper_literal") return SignMode::PaperLiteral;
  if (name == "descent") return SignMode::Descent;
  throw ConfigError("unknown sign_mode '" + std::string(name) +
                    "' (expected paper_literal or descent)");
}

namespace {

void require_object(const json& j, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!keys.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

void read_size(const json& j, const char* key, std::size_t& out, const std::string& where) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(where + "." + key + " must be a non-negative integer");
  }
  out = v.get<std::size_t>();
}

void read_seed(const json& j, const char* key, std::uint64_t& out, const std::string& where) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError(where + "." + key + " must be a non-negative integer");
  }
  out = v.get<std::uint64_t>();
}

std::vector<std::size_t> read_sizes(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of integers");
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError(where + " must hold non-negative integers");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

double read_kappa(const json& v) {
  if (v.is_string() && v.get<std::string>() == "inf") {
    return std::numeric_limits<double>::infinity();
  }
  if (!v.is_number()) throw ConfigError("kappa must be a number or \"inf\"");
  return v.get<double>();
}

}  // namespace

SyntheticSpec parse_synthetic_spec(const json& j) {
  const std::string where = "synthetic";
  require_object(j, where,
                 {"classes", "samples_per_recording", "recordings_per_class", "groups",
                  "step_min", "step_max", "sample_rate_hz", "seed"});
  SyntheticSpec spec;
  if (!j.contains("classes") || !j.at("classes").is_array()) {
    throw ConfigError("synthetic.classes must be an array");
  }
  for (const auto& c : j.at("classes")) {
    require_object(c, "synthetic class", {"label", "modes", "uniform_weight"});
    SyntheticClass cls;
    read(c, "label", cls.label, "synthetic class");
    if (cls.label.empty()) throw ConfigError("synthetic class needs a label");
    read(c, "uniform_weight", cls.uniform_weight, "synthetic class");
    if (c.contains("modes")) {
      for (const auto& m : c.at("modes")) {
        require_object(m, "direction mode", {"mean_deg", "kappa", "weight"});
        DirectionMode mode;
        read(m, "mean_deg", mode.mean_deg, "direction mode");
        read(m, "weight", mode.weight, "direction mode");
        if (m.contains("kappa")) mode.kappa = read_kappa(m.at("kappa"));
        cls.modes.push_back(mode);
      }
    }
    spec.classes.push_back(std::move(cls));
  }
  read_size(j, "samples_per_recording", spec.samples_per_recording, where);
  read_size(j, "recordings_per_class", spec.recordings_per_class, where);
  read_size(j, "groups", spec.groups, where);
  read(j, "step_min", spec.step_min, where);
  read(j, "step_max", spec.step_max, where);
  read(j, "sample_rate_hz", spec.sample_rate_hz, where);
  return spec;
}

json to_json(const SyntheticSpec& spec) {
  json classes = json::array();
  for (const auto& c : spec.classes) {
    json modes = json::array();
    for (const auto& m : c.modes) {
      modes.push_back({{"mean_deg", m.mean_deg},
                       {"kappa", std::isinf(m.kappa) ? json("inf") : json(m.kappa)},
                       {"weight", m.weight}});
    }
    classes.push_back({{"label", c.label}, {"modes", modes}, {"uniform_weight", c.uniform_weight}});
  }
  return {{"classes", classes},
          {"samples_per_recording", spec.samples_per_recording},
          {"recordings_per_class", spec.recordings_per_class},
          {"groups", spec.groups},
          {"step_min", spec.step_min},
          {"step_max", spec.step_max},
          {"sample_rate_hz", spec.sample_rate_hz}};
}

void TrainConfig::validate() const {
  if (data.manifest.has_value() == data.synthetic.has_value()) {
    throw ConfigError("data must name exactly one of manifest or synthetic");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1)");
  }
  if (features.num_sets < 1) throw ConfigError("features.num_sets must be >= 1");
  if (features.set_size < 1 || features.set_size > kMaxSetSize) {
    throw ConfigError("features.set_size must lie in [1, " + std::to_string(kMaxSetSize) + "]");
  }
  if (!(features.range_min > 0.0 && features.range_min <= features.init_range.lo &&
        features.init_range.lo <= features.init_range.hi && features.init_range.hi <= kRangeMax)) {
    throw ConfigError("features.init_range must lie within [range_min, 180] with lo <= hi");
  }
  if (!(features.training.range_lr >= 0.0)) throw ConfigError("features.range_lr must be >= 0");
  for (auto h : hidden_layers) {
    if (h == 0) throw ConfigError("network.hidden_layers entries must be positive");
  }
  schedule.validate();
}

TrainConfig parse_train_config(const json& j, const std::filesystem::path& base_dir) {
  require_object(j, "config",
                 {"data", "target", "train_fraction", "features", "network", "schedule", "seed",
                  "split_seed"});
  TrainConfig cfg;
  if (!j.contains("data")) throw ConfigError("config needs a data section");
  const auto& d = j.at("data");
  require_object(d, "data", {"manifest", "synthetic"});
  if (d.contains("manifest")) {
    std::string p;
    read(d, "manifest", p, "data");
    std::filesystem::path path(p);
    cfg.data.manifest = path.is_absolute() ? path : base_dir / path;
  }
  if (d.contains("synthetic")) {
    cfg.data.synthetic = parse_synthetic_spec(d.at("synthetic"));
    read_seed(d.at("synthetic"), "seed", cfg.data.synthetic_seed, "synthetic");
  }
  if (j.contains("target")) {
    if (!j.at("target").is_string()) throw ConfigError("target must be a string");
    cfg.target = parse_class_target(j.at("target").get<std::string>());
  }
  read(j, "train_fraction", cfg.train_fraction, "config");

  if (j.contains("features")) {
    const auto& f = j.at("features");
    require_object(f, "features",
                   {"num_sets", "set_size", "init_range", "range_min", "range_lr", "sign_mode",
                    "renormalize_gradient"});
    read_size(f, "num_sets", cfg.features.num_sets, "features");
    read_size(f, "set_size", cfg.features.set_size, "features");
    if (f.contains("init_range")) {
      const auto& r = f.at("init_range");
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
        throw ConfigError("features.init_range must be [lo, hi]");
      }
      cfg.features.init_range = {r[0].get<double>(), r[1].get<double>()};
    }
    read(f, "range_min", cfg.features.range_min, "features");
    read(f, "range_lr", cfg.features.training.range_lr, "features");
    if (f.contains("sign_mode")) {
      if (!f.at("sign_mode").is_string()) throw ConfigError("features.sign_mode must be a string");
      cfg.features.training.sign_mode = parse_sign_mode(f.at("sign_mode").get<std::string>());
    }
    read(f, "renormalize_gradient", cfg.features.training.renormalize_gradient, "features");
  }
  if (j.contains("network")) {
    const auto& n = j.at("network");
    require_object(n, "network", {"hidden_layers"});
    if (n.contains("hidden_layers")) {
      cfg.hidden_layers = read_sizes(n.at("hidden_layers"), "network.hidden_layers");
    }
  }
  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    require_object(s, "schedule",
                   {"lr_initial", "lr_reduced", "switch_epoch", "total_epochs", "momentum",
                    "batch_size", "validation_fraction"});
    read(s, "lr_initial", cfg.schedule.lr_initial, "schedule");
    read(s, "lr_reduced", cfg.schedule.lr_reduced, "schedule");
    read_size(s, "switch_epoch", cfg.schedule.switch_epoch, "schedule");
    read_size(s, "total_epochs", cfg.schedule.total_epochs, "schedule");
    read(s, "momentum", cfg.schedule.momentum, "schedule");
    read_size(s, "batch_size", cfg.schedule.batch_size, "schedule");
    read(s, "validation_fraction", cfg.schedule.validation_fraction, "schedule");
  }
  read_seed(j, "seed", cfg.seed, "config");
  if (j.contains("split_seed")) {
    std::uint64_t s = 0;
    read_seed(j, "split_seed", s, "config");
    cfg.split_seed = s;
  }
  cfg.validate();
  return cfg;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

TrainConfig load_train_config(const std::filesystem::path& path) {
  return parse_train_config(load_json_file(path), path.parent_path());
}

json to_json(const TrainConfig& c) {
  json data;
  if (c.data.manifest) data["manifest"] = c.data.manifest->string();
  if (c.data.synthetic) {
    data["synthetic"] = to_json(*c.data.synthetic);
    data["synthetic"]["seed"] = c.data.synthetic_seed;
  }
  const auto& f = c.features;
  return {{"data", data},
          {"target", to_string(c.target)},
          {"train_fraction", c.train_fraction},
          {"features",
           {{"num_sets", f.num_sets},
            {"set_size", f.set_size},
            {"init_range", {f.init_range.lo, f.init_range.hi}},
            {"range_min", f.range_min},
            {"range_lr", f.training.range_lr},
            {"sign_mode", to_string(f.training.sign_mode)},
            {"renormalize_gradient", f.training.renormalize_gradient}}},
          {"network", {{"hidden_layers", c.hidden_layers}}},
          {"schedule",
           {{"lr_initial", c.schedule.lr_initial},
            {"lr_reduced", c.schedule.lr_reduced},
            {"switch_epoch", c.schedule.switch_epoch},
            {"total_epochs", c.schedule.total_epochs},
            {"momentum", c.schedule.momentum},
            {"batch_size", c.schedule.batch_size},
            {"validation_fraction", c.schedule.validation_fraction}}},
          {"seed", c.seed},
          {"split_seed", c.resolved_split_seed()}};
}

void SweepSpec::validate() const {
  if (angle_set_counts.empty() || set_sizes.empty()) {
    throw ConfigError("sweep grid is empty: angle_set_counts and set_sizes need entries");
  }
  if (repeats < 1) throw ConfigError("sweep repeats must be >= 1");
  for (auto n : angle_set_counts) {
    if (n < 1) throw ConfigError("sweep angle set counts must be >= 1");
  }
  for (auto k : set_sizes) {
    if (k < 1 || k > kMaxSetSize) throw ConfigError("sweep set sizes out of range");
  }
}

SweepSpec parse_sweep_spec(const json& j, const std::filesystem::path& base_dir) {
  require_object(j, "sweep", {"angle_set_counts", "set_sizes", "repeats", "base"});
  SweepSpec spec;
  if (j.contains("angle_set_counts")) {
    spec.angle_set_counts = read_sizes(j.at("angle_set_counts"), "angle_set_counts");
  }
  if (j.contains("set_sizes")) spec.set_sizes = read_sizes(j.at("set_sizes"), "set_sizes");
  read_size(j, "repeats", spec.repeats, "sweep");
  if (!j.contains("base")) throw ConfigError("sweep needs a base config");
  const auto& base = j.at("base");
  if (base.is_string()) {
    std::filesystem::path p(base.get<std::string>());
    spec.base = load_train_config(p.is_absolute() ? p : base_dir / p);
  } else {
    spec.base = parse_train_config(base, base_dir);
  }
  spec.validate();
  return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  return parse_sweep_spec(load_json_file(path), path.parent_path());
}

DatasetManifest load_dataset(const TrainConfig& config) {
  if (config.data.manifest) return load_manifest(*config.data.manifest, config.target);
  auto spec = *config.data.synthetic;
  spec.label_field = config.target;
  return synthetic_manifest(spec, config.data.synthetic_seed);
}

std::string config_reference() {
  return R"(Train config (JSON). Every key except data is optional; defaults shown.
  data.manifest                 path to path,subject_id,stimulus_id CSV (relative to config)
  data.synthetic                generator spec instead of a manifest:
    classes[]                     {label, modes[{mean_deg, kappa (number|"inf"), weight}], uniform_weight}
    samples_per_recording 100, recordings_per_class 20, groups 4,
    step_min 1, step_max 3, sample_rate_hz 250, seed 0
  target                  "stimulus"  class label field (subject|stimulus)
  train_fraction          0.5         share of groups in the train half of the disjoint split
  features.num_sets       4096
  features.set_size       4           bins per set = 2^set_size
  features.init_range     [10, 60]    degrees
  features.range_min      0.5         degrees; ranges are clamped to [range_min, 180]
  features.range_lr       0.001       0 freezes the angle ranges
  features.sign_mode      "paper_literal"  (range += lr*acc) or "descent" (range -= lr*acc)
  features.renormalize_gradient false chain the bin gradient through histogram normalization
  network.hidden_layers   [256, 128]  ReLU layers before the softmax layer
  schedule.lr_initial     0.001
  schedule.lr_reduced     0.0001
  schedule.switch_epoch   50
  schedule.total_epochs   100
  schedule.momentum       0.9
  schedule.batch_size     32
  schedule.validation_fraction 0.2    held out of the train half
  seed                    1           bank, network init and shuffling
  split_seed              = seed      data split

Sweep spec (JSON): {"angle_set_counts": [...], "set_sizes": [...], "repeats": 1,
                    "base": <train config object or path>}
)";
}

}  // namespace scanpath
