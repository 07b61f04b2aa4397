#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scanpath/dataset.hpp"
#include "scanpath/gaze.hpp"

namespace scanpath {

/// One preferred saccade direction: von Mises around `mean_deg` with
/// concentration `kappa` (infinity means every step is exactly at the mean).
struct DirectionMode {
  double mean_deg = 0.0;
  double kappa = 10.0;
  double weight = 1.0;
};

struct SyntheticClass {
  std::string label;
  std::vector<DirectionMode> modes;
  double uniform_weight = 0.0;  // share of steps in a uniformly random direction
};

struct SyntheticSpec {
  std::vector<SyntheticClass> classes;
  std::size_t samples_per_recording = 100;
  std::size_t recordings_per_class = 20;
  // Recordings of each class are spread round-robin over this many groups
  // (subjects when the label is the stimulus and vice versa).
  std::size_t groups = 4;
  ClassTarget label_field = ClassTarget::Stimulus;
  double step_min = 1.0;
  double step_max = 3.0;
  double sample_rate_hz = 250.0;
};

/// Draws one angle (radians, unwrapped) from a von Mises distribution using
/// the Best-Fisher rejection sampler.
double sample_von_mises(double mean_rad, double kappa, std::mt19937_64& rng);

/// Class-major recordings; deterministic given the seed.
std::vector<GazeRecording> generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

DatasetManifest synthetic_manifest(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace scanpath
