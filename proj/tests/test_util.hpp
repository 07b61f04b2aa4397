#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "scanpath/angle_feature.hpp"
#include "scanpath/gaze.hpp"

namespace scanpath::testing {

inline std::vector<double> random_angles(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(0.0, 360.0);
  std::vector<double> out(n);
  for (auto& a : out) a = dist(rng);
  return out;
}

/// Random bank with ranges anywhere in [range_min, 180].
inline AngleSetBank random_bank(std::mt19937_64& rng, std::size_t max_sets,
                                std::size_t max_size) {
  std::uniform_int_distribution<std::size_t> sets_dist(1, max_sets);
  std::uniform_int_distribution<std::size_t> size_dist(1, max_size);
  std::uniform_real_distribution<double> lo_dist(kDefaultRangeMin, 90.0);
  const auto n = sets_dist(rng);
  const auto k = size_dist(rng);
  const double lo = lo_dist(rng);
  std::uniform_real_distribution<double> hi_dist(lo, 180.0);
  return init_bank(n, k, rng(), {lo, hi_dist(rng)});
}

inline GazeRecording recording_from(const std::vector<std::pair<double, double>>& pts) {
  std::vector<GazeSample> s;
  for (auto [x, y] : pts) s.push_back({x, y, std::nullopt});
  return GazeRecording(std::move(s), "s", "m");
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("scanpath_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace scanpath::testing
