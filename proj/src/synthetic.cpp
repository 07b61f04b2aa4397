#include "scanpath/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "scanpath/error.hpp"

namespace scanpath {

double sample_von_mises(double mean_rad, double kappa, std::mt19937_64& rng) {
  constexpr double pi = std::numbers::pi;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (std::isinf(kappa)) return mean_rad;
  if (kappa < 1e-8) return mean_rad + pi * (2.0 * unit(rng) - 1.0);
  if (kappa > 1e6) {
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(kappa));
    return mean_rad + normal(rng);
  }
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  while (true) {
    const double u1 = unit(rng);
    const double u2 = unit(rng);
    const double u3 = unit(rng);
    const double z = std::cos(pi * u1);
    const double f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double theta = std::acos(std::clamp(f, -1.0, 1.0));
      return u3 > 0.5 ? mean_rad + theta : mean_rad - theta;
    }
  }
}

namespace {

void validate(const SyntheticSpec& spec) {
  if (spec.classes.empty()) throw ConfigError("synthetic spec has zero classes");
  if (spec.classes.size() < 2) throw ConfigError("synthetic spec needs >= 2 classes");
  if (spec.samples_per_recording < 2) {
    throw ConfigError("synthetic recordings need >= 2 samples");
  }
  if (spec.recordings_per_class == 0) throw ConfigError("synthetic spec has zero recordings");
  if (spec.groups == 0) throw ConfigError("synthetic spec needs >= 1 group");
  if (!(spec.step_min > 0.0 && spec.step_min <= spec.step_max)) {
    throw ConfigError("synthetic step lengths must satisfy 0 < step_min <= step_max");
  }
  if (!(spec.sample_rate_hz > 0.0)) throw ConfigError("sample rate must be positive");
  for (const auto& c : spec.classes) {
    double total = c.uniform_weight;
    if (c.uniform_weight < 0.0) throw ConfigError("negative uniform weight in class " + c.label);
    for (const auto& m : c.modes) {
      if (m.weight < 0.0 || !(m.kappa >= 0.0)) {
        throw ConfigError("bad direction mode in class " + c.label);
      }
      total += m.weight;
    }
    if (!(total > 0.0)) throw ConfigError("class " + c.label + " has no direction mass");
  }
}

}  // namespace

std::vector<GazeRecording> generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  validate(spec);
  constexpr double deg = std::numbers::pi / 180.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> step(spec.step_min, spec.step_max);
  const double period_ms = 1000.0 / spec.sample_rate_hz;

  std::vector<GazeRecording> out;
  out.reserve(spec.classes.size() * spec.recordings_per_class);
  for (const auto& cls : spec.classes) {
    std::vector<double> weights;
    for (const auto& m : cls.modes) weights.push_back(m.weight);
    weights.push_back(cls.uniform_weight);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());

    for (std::size_t r = 0; r < spec.recordings_per_class; ++r) {
      std::vector<GazeSample> samples;
      samples.reserve(spec.samples_per_recording);
      double x = 100.0 * unit(rng);
      double y = 100.0 * unit(rng);
      for (std::size_t i = 0; i < spec.samples_per_recording; ++i) {
        samples.push_back({x, y, static_cast<double>(i) * period_ms});
        const auto which = pick(rng);
        double theta = 0.0;
        if (which < cls.modes.size()) {
          theta = sample_von_mises(cls.modes[which].mean_deg * deg, cls.modes[which].kappa, rng);
        } else {
          theta = 2.0 * std::numbers::pi * unit(rng);
        }
        const double len = step(rng);
        x += len * std::cos(theta);
        y += len * std::sin(theta);
      }
      const auto group = "g" + std::to_string(r % spec.groups);
      if (spec.label_field == ClassTarget::Stimulus) {
        out.emplace_back(std::move(samples), group, cls.label);
      } else {
        out.emplace_back(std::move(samples), cls.label, group);
      }
    }
  }
  return out;
}

DatasetManifest synthetic_manifest(const SyntheticSpec& spec, std::uint64_t seed) {
  DatasetManifest m;
  m.class_target = spec.label_field;
  for (auto& rec : generate_synthetic(spec, seed)) m.entries.push_back({{}, std::move(rec)});
  return m;
}

}  // namespace scanpath
