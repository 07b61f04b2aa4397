#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scanpath {

struct GazeSample {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> t;  // milliseconds

  bool operator==(const GazeSample&) const = default;
};

/// A labeled, ordered sequence of gaze samples. Construction checks that all
/// coordinates are finite and that timestamps never decrease; the length is
/// not checked here so that short files can still be reported by
/// compute_angles.
class GazeRecording {
 public:
  GazeRecording(std::vector<GazeSample> samples, std::string subject_id,
                std::string stimulus_id);

  const std::vector<GazeSample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const std::string& subject_id() const { return subject_id_; }
  const std::string& stimulus_id() const { return stimulus_id_; }

  bool operator==(const GazeRecording&) const = default;

 private:
  std::vector<GazeSample> samples_;
  std::string subject_id_;
  std::string stimulus_id_;
};

/// Inter-sample directions in degrees, each in [0, 360).
class AngleSequence {
 public:
  AngleSequence() = default;
  explicit AngleSequence(std::vector<double> degrees);

  std::span<const double> values() const { return angles_; }
  std::size_t size() const { return angles_.size(); }
  bool empty() const { return angles_.empty(); }
  double operator[](std::size_t i) const { return angles_[i]; }

  bool operator==(const AngleSequence&) const = default;

 private:
  std::vector<double> angles_;
};

/// Maps any finite angle in degrees into [0, 360).
double wrap_degrees(double degrees);

/// Direction of each displacement between consecutive samples, counter-
/// clockwise from +x. A zero displacement yields 0. Throws RecordingTooShort
/// for fewer than two samples.
AngleSequence compute_angles(const GazeRecording& recording);

/// Reads `x,y` or `x,y,t` rows; a non-numeric first line is taken as header.
GazeRecording parse_gaze_csv(std::istream& in, std::string subject_id,
                             std::string stimulus_id,
                             const std::string& source_name = "<stream>");
GazeRecording read_gaze_csv(const std::filesystem::path& path,
                            std::string subject_id, std::string stimulus_id);

void write_gaze_csv(const std::filesystem::path& path,
                    const GazeRecording& recording);

}  // namespace scanpath
