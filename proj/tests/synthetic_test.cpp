#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "scanpath/error.hpp"
#include "scanpath/synthetic.hpp"

namespace scanpath {
namespace {

double circular_mean_deg(std::span<const double> angles) {
  double s = 0.0, c = 0.0;
  for (double a : angles) {
    s += std::sin(a * std::numbers::pi / 180.0);
    c += std::cos(a * std::numbers::pi / 180.0);
  }
  return wrap_degrees(std::atan2(s, c) * 180.0 / std::numbers::pi);
}

double angular_gap(double a, double b) {
  const double d = std::fabs(a - b);
  return std::min(d, 360.0 - d);
}

SyntheticSpec two_class(double kappa) {
  SyntheticSpec spec;
  spec.classes = {{"A", {{0.0, kappa, 1.0}}, 0.0}, {"B", {{90.0, kappa, 1.0}}, 0.0}};
  spec.samples_per_recording = 100;
  spec.recordings_per_class = 6;
  spec.groups = 3;
  return spec;
}

TEST(Synthetic, CircularMeanNearClassMode) {
  const auto recs = generate_synthetic(two_class(8.0), 42);
  ASSERT_EQ(recs.size(), 12u);
  for (const auto& r : recs) {
    ASSERT_EQ(r.size(), 100u);
    const double mode = r.stimulus_id() == "A" ? 0.0 : 90.0;
    EXPECT_LT(angular_gap(circular_mean_deg(compute_angles(r).values()), mode), 10.0);
  }
}

TEST(Synthetic, InfiniteConcentrationHitsModeExactly) {
  const auto recs = generate_synthetic(two_class(std::numeric_limits<double>::infinity()), 1);
  for (const auto& r : recs) {
    const double mode = r.stimulus_id() == "A" ? 0.0 : 90.0;
    const auto angles = compute_angles(r);
    for (double a : angles.values()) EXPECT_LT(angular_gap(a, mode), 1e-9);
  }
}

TEST(Synthetic, SameSeedIsBitIdentical) {
  const auto spec = two_class(4.0);
  EXPECT_EQ(generate_synthetic(spec, 7), generate_synthetic(spec, 7));
  EXPECT_NE(generate_synthetic(spec, 7), generate_synthetic(spec, 8));
}

TEST(Synthetic, GroupsAndLabels) {
  auto spec = two_class(4.0);
  spec.label_field = ClassTarget::Subject;
  const auto m = synthetic_manifest(spec, 3);
  EXPECT_EQ(m.class_target, ClassTarget::Subject);
  EXPECT_EQ(m.classes(), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(m.entries[4].stimulus_id(), "g1");
}

TEST(Synthetic, InvalidSpecs) {
  SyntheticSpec empty;
  EXPECT_THROW(generate_synthetic(empty, 1), ConfigError);
  auto zero_len = two_class(1.0);
  zero_len.samples_per_recording = 0;
  EXPECT_THROW(generate_synthetic(zero_len, 1), ConfigError);
  auto no_mass = two_class(1.0);
  no_mass.classes[0].modes[0].weight = 0.0;
  EXPECT_THROW(generate_synthetic(no_mass, 1), ConfigError);
}

TEST(VonMises, SampleMeanAndSpread) {
  std::mt19937_64 rng(99);
  const double kappa = 50.0;
  double s = 0.0, c = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double t = sample_von_mises(1.0, kappa, rng);
    s += std::sin(t);
    c += std::cos(t);
  }
  EXPECT_NEAR(std::atan2(s, c), 1.0, 0.01);
  // Mean resultant length I1(k)/I0(k) ~ 1 - 1/(2k) - 1/(8k^2) for large k.
  const double expected_r = 1.0 - 1.0 / (2 * kappa) - 1.0 / (8 * kappa * kappa);
  EXPECT_NEAR(std::hypot(s, c) / n, expected_r, 0.002);
}

}  // namespace
}  // namespace scanpath
