#pragma once

// Trainable angle/angle-range histogram layer.
//
// A bank holds `num_sets` angle sets of `set_size` checks each. A check fires
// on an inter-sample angle when the angle lies within `range` degrees of its
// fixed `base` (circular distance, wrapping at 360). Every set slides over
// the angle sequence; in each window the firing pattern of its checks forms
// a binary index (check k contributes 2^k) and the matching histogram bin is
// incremented. Histograms are normalized per set.
//
// Training only moves the ranges. The backward pass walks the stored window
// indices, adds each window's bin gradient to the accumulator of every check
// whose bit is set, and only then applies all accumulated updates at once.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scanpath/gaze.hpp"

namespace scanpath {

inline constexpr double kDefaultRangeMin = 0.5;
inline constexpr double kRangeMax = 180.0;
inline constexpr std::size_t kMaxSetSize = 20;

struct DegreeInterval {
  double lo = 10.0;
  double hi = 60.0;

  bool operator==(const DegreeInterval&) const = default;
};

struct AngleCheck {
  double base = 0.0;          // degrees in [0, 360), fixed after init
  double range = 0.0;         // half-width in [range_min, 180]
  double range_update = 0.0;  // accumulated bin gradient

  bool operator==(const AngleCheck&) const = default;
};

struct AngleSet {
  std::size_t set_index = 0;
  std::vector<AngleCheck> checks;

  bool operator==(const AngleSet&) const = default;
};

class AngleSetBank {
 public:
  /// Validates shape (every set has `set_size` checks, indices 0..n-1 in
  /// order), bases in [0, 360) and ranges in [range_min, 180].
  AngleSetBank(std::vector<AngleSet> sets, std::size_t set_size, std::uint64_t seed,
               double range_min = kDefaultRangeMin);

  std::size_t num_sets() const { return sets_.size(); }
  std::size_t set_size() const { return set_size_; }
  std::size_t bins() const { return std::size_t{1} << set_size_; }
  std::size_t feature_size() const { return num_sets() * bins(); }
  std::uint64_t seed() const { return seed_; }
  double range_min() const { return range_min_; }

  const std::vector<AngleSet>& sets() const { return sets_; }
  const AngleCheck& check(std::size_t set, std::size_t k) const { return sets_[set].checks[k]; }

  /// Sets a range, clamped to [range_min, 180].
  void set_range(std::size_t set, std::size_t k, double range);

  void reset_updates();
  void add_update(std::size_t set, std::size_t k, double amount) {
    sets_[set].checks[k].range_update += amount;
  }

  bool operator==(const AngleSetBank&) const = default;

 private:
  std::vector<AngleSet> sets_;
  std::size_t set_size_;
  std::uint64_t seed_;
  double range_min_;
};

/// Bases uniform on [0, 360), ranges uniform on `init_range`.
AngleSetBank init_bank(std::size_t num_sets, std::size_t set_size, std::uint64_t seed,
                       DegreeInterval init_range = {},
                       double range_min = kDefaultRangeMin);

/// Reorders sets so that new set i is old set `order[i]`; set indices are
/// renumbered.
AngleSetBank permute_sets(const AngleSetBank& bank, std::span<const std::size_t> order);

double circular_distance(double a, double b);
bool check_fires(const AngleCheck& check, double angle);

/// Per-set normalized histograms, set-major (row i holds bins of set i).
struct FeatureTensor {
  std::size_t num_sets = 0;
  std::size_t bins = 0;
  std::vector<double> values;
  std::vector<std::size_t> window_counts;
  bool sequence_too_short = false;

  double at(std::size_t set, std::size_t bin) const { return values[set * bins + bin]; }
  std::span<const double> row(std::size_t set) const {
    return std::span<const double>(values).subspan(set * bins, bins);
  }
};

struct BinGradient {
  std::size_t num_sets = 0;
  std::size_t bins = 0;
  std::vector<double> values;

  static BinGradient zeros(std::size_t num_sets, std::size_t bins) {
    return {num_sets, bins, std::vector<double>(num_sets * bins, 0.0)};
  }
  double& at(std::size_t set, std::size_t bin) { return values[set * bins + bin]; }
  double at(std::size_t set, std::size_t bin) const { return values[set * bins + bin]; }
};

/// The bin index every (set, window) landed in during forward.
struct FiredTrace {
  std::size_t num_sets = 0;
  std::size_t num_windows = 0;
  std::vector<std::uint32_t> indices;  // set-major

  std::uint32_t index(std::size_t set, std::size_t window) const {
    return indices[set * num_windows + window];
  }
};

/// Unnormalized histograms: counts per (set, bin).
struct HistogramCounts {
  std::size_t num_sets = 0;
  std::size_t bins = 0;
  std::size_t windows = 0;
  std::vector<std::uint64_t> counts;
};

struct ForwardResult {
  FeatureTensor features;
  FiredTrace trace;
};

/// Number of full windows: len - set_size + 1, or 0 when the sequence is
/// shorter than a set.
std::size_t window_count(std::size_t sequence_length, std::size_t set_size);

HistogramCounts forward_counts(const AngleSetBank& bank, const AngleSequence& seq,
                               FiredTrace* trace = nullptr);

FeatureTensor normalize_histograms(const HistogramCounts& counts);

ForwardResult forward(const AngleSetBank& bank, const AngleSequence& seq);

enum class SignMode {
  PaperLiteral,  // range += lr * accumulated
  Descent,       // range -= lr * accumulated
};

/// Phase one: adds grad[set][index] to the accumulator of every check whose
/// bit is set in the stored index. Ranges are not touched.
void accumulate_range_updates(AngleSetBank& bank, const FiredTrace& trace,
                              const BinGradient& grad);

/// Phase two: moves every range by +-lr times its accumulator, clamps, and
/// zeroes the accumulators.
void apply_range_updates(AngleSetBank& bank, double range_lr, SignMode mode);

/// Single-sequence backward pass: reset, accumulate, apply. `seq` must be the
/// sequence `trace` was produced from.
void backward(AngleSetBank& bank, const AngleSequence& seq, const FiredTrace& trace,
              const BinGradient& grad, double range_lr, SignMode mode);

/// Chain rule through per-set normalization: for a nonempty row with raw sum
/// S, out_b = (g_b - sum_c g_c h_c) / S. Empty rows map to zero.
BinGradient renormalize_gradient(const FeatureTensor& tensor, const BinGradient& upstream);

}  // namespace scanpath
