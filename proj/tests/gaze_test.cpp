#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "scanpath/error.hpp"
#include "scanpath/gaze.hpp"
#include "test_util.hpp"

namespace scanpath {
namespace {

using testing::recording_from;

TEST(ComputeAngles, AxisAndDiagonalMoves) {
  EXPECT_EQ(compute_angles(recording_from({{0, 0}, {1, 0}})).values()[0], 0.0);

  const auto two = compute_angles(recording_from({{0, 0}, {0, 1}, {-1, 1}}));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_DOUBLE_EQ(two[0], 90.0);
  EXPECT_DOUBLE_EQ(two[1], 180.0);

  EXPECT_DOUBLE_EQ(compute_angles(recording_from({{0, 0}, {1, 1}}))[0], 45.0);
}

TEST(ComputeAngles, NegativeDirectionsWrapIntoRange) {
  const auto a = compute_angles(recording_from({{0, 0}, {0, -1}, {1, -2}}));
  EXPECT_DOUBLE_EQ(a[0], 270.0);
  EXPECT_DOUBLE_EQ(a[1], 315.0);
}

TEST(ComputeAngles, ZeroDisplacementIsZero) {
  const auto a = compute_angles(recording_from({{3, 4}, {3, 4}, {3, 5}}));
  EXPECT_EQ(a[0], 0.0);
  EXPECT_DOUBLE_EQ(a[1], 90.0);
}

TEST(ComputeAngles, TooShortThrows) {
  EXPECT_THROW(compute_angles(recording_from({{0, 0}})), RecordingTooShort);
  EXPECT_THROW(compute_angles(recording_from({})), RecordingTooShort);
}

TEST(WrapDegrees, TinyNegativeMapsToZero) {
  EXPECT_EQ(wrap_degrees(-1e-20), 0.0);
  EXPECT_EQ(wrap_degrees(360.0), 0.0);
  EXPECT_DOUBLE_EQ(wrap_degrees(-90.0), 270.0);
  EXPECT_DOUBLE_EQ(wrap_degrees(725.0), 5.0);
}

TEST(ComputeAngles, RotationShiftsAndTranslationPreserves) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-500.0, 500.0);
  std::uniform_real_distribution<double> angle(0.0, 360.0);
  std::uniform_int_distribution<int> len(2, 60);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<double, double>> pts(len(rng));
    for (auto& p : pts) p = {coord(rng), coord(rng)};
    const auto base = compute_angles(recording_from(pts));
    ASSERT_EQ(base.size(), pts.size() - 1);

    const double phi = angle(rng);
    const double px = coord(rng), py = coord(rng);
    const double c = std::cos(phi * std::numbers::pi / 180.0);
    const double s = std::sin(phi * std::numbers::pi / 180.0);
    auto rotated = pts;
    for (auto& p : rotated) {
      const double rx = p.first - px, ry = p.second - py;
      p = {px + c * rx - s * ry, py + s * rx + c * ry};
    }
    const auto rot = compute_angles(recording_from(rotated));
    for (std::size_t j = 0; j < base.size(); ++j) {
      const double expected = wrap_degrees(base[j] + phi);
      double diff = std::fabs(rot[j] - expected);
      diff = std::min(diff, 360.0 - diff);
      EXPECT_LT(diff, 1e-9) << "trial " << trial << " angle " << j;
    }
  }
}

// Translation is exact whenever the coordinate arithmetic is, which holds for
// integer-valued samples.
TEST(ComputeAngles, IntegerTranslationIsExact) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coord(-10000, 10000);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<double, double>> pts(20);
    for (auto& p : pts) p = {coord(rng), coord(rng)};
    const double dx = coord(rng), dy = coord(rng);
    auto moved = pts;
    for (auto& p : moved) p = {p.first + dx, p.second + dy};
    EXPECT_EQ(compute_angles(recording_from(pts)), compute_angles(recording_from(moved)));
  }
}

TEST(GazeRecording, RejectsNonFiniteAndDecreasingTime) {
  EXPECT_THROW(GazeRecording({{0, NAN, {}}, {1, 1, {}}}, "s", "m"), Error);
  EXPECT_THROW(GazeRecording({{0, 0, 5.0}, {1, 1, 4.0}}, "s", "m"), Error);
  EXPECT_NO_THROW(GazeRecording({{0, 0, 4.0}, {1, 1, 4.0}}, "s", "m"));
}

TEST(AngleSequence, RejectsOutOfRange) {
  EXPECT_THROW(AngleSequence({360.0}), Error);
  EXPECT_THROW(AngleSequence({-0.1}), Error);
  EXPECT_NO_THROW(AngleSequence({0.0, 359.9}));
}

TEST(GazeCsv, HeaderDetectionAndLineEndings) {
  std::istringstream with_header("x,y,t\r\n1,2,0\r\n3,4,4\r\n");
  const auto a = parse_gaze_csv(with_header, "s1", "img");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a.samples()[1], (GazeSample{3, 4, 4.0}));
  EXPECT_EQ(a.subject_id(), "s1");

  std::istringstream no_header("\n1.5,2\n-3e2,4\n");
  const auto b = parse_gaze_csv(no_header, "s", "m");
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b.samples()[1].x, -300.0);
  EXPECT_FALSE(b.samples()[1].t.has_value());
}

TEST(GazeCsv, MalformedRowsReportLine) {
  std::istringstream bad("x,y\n1,2\n3,oops\n");
  try {
    parse_gaze_csv(bad, "s", "m", "f.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("f.csv:3"), std::string::npos) << e.what();
  }
  std::istringstream cols("1,2,3,4\n");
  EXPECT_THROW(parse_gaze_csv(cols, "s", "m"), ParseError);
  std::istringstream back("0,0,10\n1,1,5\n");
  EXPECT_THROW(parse_gaze_csv(back, "s", "m"), ParseError);
}

TEST(GazeCsv, WriteThenReadIsExact) {
  const auto dir = testing::temp_dir("gaze_rw");
  const GazeRecording rec({{0.1, 1.0 / 3.0, 0.0}, {2.5e-7, -4.0, 4.0}}, "a", "b");
  write_gaze_csv(dir / "r.csv", rec);
  EXPECT_EQ(read_gaze_csv(dir / "r.csv", "a", "b"), rec);
}

}  // namespace
}  // namespace scanpath
