#include "scanpath/gaze.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "scanpath/error.hpp"
#include "scanpath/text.hpp"

namespace scanpath {

GazeRecording::GazeRecording(std::vector<GazeSample> samples,
                             std::string subject_id, std::string stimulus_id)
    : samples_(std::move(samples)),
      subject_id_(std::move(subject_id)),
      stimulus_id_(std::move(stimulus_id)) {
  std::optional<double> last_t;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.x) || !std::isfinite(s.y)) {
      throw Error("gaze sample " + std::to_string(i) + " has a non-finite coordinate");
    }
    if (s.t) {
      if (!std::isfinite(*s.t)) {
        throw Error("gaze sample " + std::to_string(i) + " has a non-finite timestamp");
      }
      if (last_t && *s.t < *last_t) {
        throw Error("gaze sample " + std::to_string(i) + " has a decreasing timestamp");
      }
      last_t = s.t;
    }
  }
}

AngleSequence::AngleSequence(std::vector<double> degrees) : angles_(std::move(degrees)) {
  for (double a : angles_) {
    if (!(a >= 0.0 && a < 360.0)) {
      throw Error("angle " + text::format_double(a) + " outside [0, 360)");
    }
  }
}

double wrap_degrees(double degrees) {
  double wrapped = std::fmod(degrees, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  // fmod of a tiny negative value plus 360 rounds to 360 itself.
  if (wrapped >= 360.0) wrapped = 0.0;
  return wrapped;
}

AngleSequence compute_angles(const GazeRecording& recording) {
  const auto& s = recording.samples();
  if (s.size() < 2) {
    throw RecordingTooShort("recording needs at least 2 samples, has " +
                            std::to_string(s.size()));
  }
  std::vector<double> angles;
  angles.reserve(s.size() - 1);
  for (std::size_t j = 0; j + 1 < s.size(); ++j) {
    const double dx = s[j + 1].x - s[j].x;
    const double dy = s[j + 1].y - s[j].y;
    if (dx == 0.0 && dy == 0.0) {
      angles.push_back(0.0);
      continue;
    }
    angles.push_back(wrap_degrees(std::atan2(dy, dx) * 180.0 / std::numbers::pi));
  }
  return AngleSequence(std::move(angles));
}

GazeRecording parse_gaze_csv(std::istream& in, std::string subject_id,
                             std::string stimulus_id, const std::string& source_name) {
  std::vector<GazeSample> samples;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::split_csv(line);
    const bool first = !seen_content;
    seen_content = true;
    auto x = fields.size() >= 1 ? text::parse_double(fields[0]) : std::nullopt;
    if (first && !x) continue;  // header
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(source_name + ":" + std::to_string(line_no) +
                       ": expected 2 or 3 columns, got " + std::to_string(fields.size()));
    }
    const auto y = text::parse_double(fields[1]);
    std::optional<double> t;
    if (fields.size() == 3) {
      t = text::parse_double(fields[2]);
      if (!t) {
        throw ParseError(source_name + ":" + std::to_string(line_no) + ": bad timestamp");
      }
    }
    if (!x || !y) {
      throw ParseError(source_name + ":" + std::to_string(line_no) + ": bad coordinate");
    }
    samples.push_back({*x, *y, t});
  }
  try {
    return GazeRecording(std::move(samples), std::move(subject_id), std::move(stimulus_id));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(source_name + ": " + e.what());
  }
}

GazeRecording read_gaze_csv(const std::filesystem::path& path, std::string subject_id,
                            std::string stimulus_id) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open gaze file " + path.string());
  return parse_gaze_csv(in, std::move(subject_id), std::move(stimulus_id), path.string());
}

void write_gaze_csv(const std::filesystem::path& path, const GazeRecording& recording) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  const bool timed = !recording.samples().empty() && recording.samples().front().t.has_value();
  out << (timed ? "x,y,t\n" : "x,y\n");
  for (const auto& s : recording.samples()) {
    out << text::format_double(s.x) << ',' << text::format_double(s.y);
    if (timed && s.t) out << ',' << text::format_double(*s.t);
    out << '\n';
  }
}

}  // namespace scanpath
