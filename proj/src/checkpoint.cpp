#include "scanpath/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scanpath/bank_io.hpp"
#include "scanpath/config.hpp"
#include "scanpath/error.hpp"

namespace scanpath {

using nlohmann::json;

void Checkpoint::validate() const {
  const auto& spec = network.spec();
  if (spec.input_dim != bank.feature_size()) {
    throw ShapeMismatch("checkpoint network expects " + std::to_string(spec.input_dim) +
                        " features but its bank produces " +
                        std::to_string(bank.feature_size()));
  }
  if (spec.num_classes != classes.size()) {
    throw ShapeMismatch("checkpoint network has " + std::to_string(spec.num_classes) +
                        " outputs for " + std::to_string(classes.size()) + " classes");
  }
}

std::string checkpoint_to_string(const Checkpoint& c) {
  c.validate();
  const auto& spec = c.network.spec();
  const auto params = c.network.parameters();
  json j;
  j["format"] = "scanpath-checkpoint";
  j["version"] = kCheckpointVersion;
  j["target"] = to_string(c.target);
  j["classes"] = c.classes;
  j["network"] = {{"input_dim", spec.input_dim},
                  {"hidden_layers", spec.hidden_layers},
                  {"num_classes", spec.num_classes},
                  {"activation", to_string(spec.activation)},
                  {"weight_init_seed", spec.weight_init_seed}};
  j["weights"] = std::vector<double>(params.begin(), params.end());
  j["bank"] = bank_to_string(c.bank);
  j["schedule"] = {{"lr_initial", c.schedule.lr_initial},
                   {"lr_reduced", c.schedule.lr_reduced},
                   {"switch_epoch", c.schedule.switch_epoch},
                   {"total_epochs", c.schedule.total_epochs},
                   {"momentum", c.schedule.momentum},
                   {"batch_size", c.schedule.batch_size},
                   {"validation_fraction", c.schedule.validation_fraction}};
  j["ranges"] = {{"range_lr", c.ranges.range_lr},
                 {"sign_mode", to_string(c.ranges.sign_mode)},
                 {"renormalize_gradient", c.ranges.renormalize_gradient}};
  j["snapshot"] = {{"epoch", c.epoch}, {"validation_accuracy", c.validation_accuracy}};
  return j.dump(1) + "\n";
}

Checkpoint checkpoint_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("checkpoint is not valid JSON (truncated?): ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "scanpath-checkpoint") {
      throw ParseError("not a scanpath checkpoint");
    }
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw ParseError("unsupported checkpoint version " + std::to_string(version));
    }
    const auto& n = j.at("network");
    NetworkSpec spec;
    spec.input_dim = n.at("input_dim").get<std::size_t>();
    spec.hidden_layers = n.at("hidden_layers").get<std::vector<std::size_t>>();
    spec.num_classes = n.at("num_classes").get<std::size_t>();
    spec.activation = parse_activation(n.at("activation").get<std::string>());
    spec.weight_init_seed = n.at("weight_init_seed").get<std::uint64_t>();

    auto network = Mlp::zeros(spec);
    const auto weights = j.at("weights").get<std::vector<double>>();
    if (weights.size() != network.parameter_count()) {
      throw ParseError("checkpoint holds " + std::to_string(weights.size()) +
                       " weights, network needs " + std::to_string(network.parameter_count()));
    }
    network.set_parameters(weights);

    TrainSchedule schedule;
    const auto& s = j.at("schedule");
    schedule.lr_initial = s.at("lr_initial").get<double>();
    schedule.lr_reduced = s.at("lr_reduced").get<double>();
    schedule.switch_epoch = s.at("switch_epoch").get<std::size_t>();
    schedule.total_epochs = s.at("total_epochs").get<std::size_t>();
    schedule.momentum = s.at("momentum").get<double>();
    schedule.batch_size = s.at("batch_size").get<std::size_t>();
    schedule.validation_fraction = s.at("validation_fraction").get<double>();

    RangeTraining ranges;
    const auto& r = j.at("ranges");
    ranges.range_lr = r.at("range_lr").get<double>();
    ranges.sign_mode = parse_sign_mode(r.at("sign_mode").get<std::string>());
    ranges.renormalize_gradient = r.at("renormalize_gradient").get<bool>();

    Checkpoint c{bank_from_string(j.at("bank").get<std::string>()),
                 std::move(network),
                 parse_class_target(j.at("target").get<std::string>()),
                 j.at("classes").get<std::vector<std::string>>(),
                 schedule,
                 ranges,
                 j.at("snapshot").at("epoch").get<std::size_t>(),
                 j.at("snapshot").at("validation_accuracy").get<double>()};
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  const auto text = checkpoint_to_string(checkpoint);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return checkpoint_from_string(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace scanpath
