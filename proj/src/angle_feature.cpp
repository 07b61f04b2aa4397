#include "scanpath/angle_feature.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "scanpath/error.hpp"
#include "scanpath/text.hpp"

namespace scanpath {

AngleSetBank::AngleSetBank(std::vector<AngleSet> sets, std::size_t set_size,
                           std::uint64_t seed, double range_min)
    : sets_(std::move(sets)), set_size_(set_size), seed_(seed), range_min_(range_min) {
  if (sets_.empty()) throw ConfigError("angle set bank needs >= 1 set");
  if (set_size_ < 1 || set_size_ > kMaxSetSize) {
    throw ConfigError("set size must lie in [1, " + std::to_string(kMaxSetSize) + "]");
  }
  if (!(range_min_ > 0.0 && range_min_ <= kRangeMax)) {
    throw ConfigError("range_min must lie in (0, 180]");
  }
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    const auto& s = sets_[i];
    if (s.set_index != i) throw ConfigError("angle set " + std::to_string(i) + " is out of order");
    if (s.checks.size() != set_size_) {
      throw ShapeMismatch("angle set " + std::to_string(i) + " has " +
                          std::to_string(s.checks.size()) + " checks, expected " +
                          std::to_string(set_size_));
    }
    for (const auto& c : s.checks) {
      if (!(c.base >= 0.0 && c.base < 360.0)) {
        throw ConfigError("base angle " + text::format_double(c.base) + " outside [0, 360)");
      }
      if (!(c.range >= range_min_ && c.range <= kRangeMax)) {
        throw ConfigError("range " + text::format_double(c.range) + " outside [" +
                          text::format_double(range_min_) + ", 180]");
      }
    }
  }
}

void AngleSetBank::set_range(std::size_t set, std::size_t k, double range) {
  sets_[set].checks[k].range = std::clamp(range, range_min_, kRangeMax);
}

void AngleSetBank::reset_updates() {
  for (auto& s : sets_) {
    for (auto& c : s.checks) c.range_update = 0.0;
  }
}

AngleSetBank init_bank(std::size_t num_sets, std::size_t set_size, std::uint64_t seed,
                       DegreeInterval init_range, double range_min) {
  if (num_sets < 1) throw ConfigError("num_sets must be >= 1");
  if (set_size < 1 || set_size > kMaxSetSize) {
    throw ConfigError("set size must lie in [1, " + std::to_string(kMaxSetSize) + "]");
  }
  if (!(init_range.lo >= range_min && init_range.lo <= init_range.hi &&
        init_range.hi <= kRangeMax)) {
    throw ConfigError("init range [" + text::format_double(init_range.lo) + ", " +
                      text::format_double(init_range.hi) + "] not within [" +
                      text::format_double(range_min) + ", 180]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> base_dist(0.0, 360.0);
  std::uniform_real_distribution<double> range_dist(init_range.lo, init_range.hi);
  std::vector<AngleSet> sets(num_sets);
  for (std::size_t i = 0; i < num_sets; ++i) {
    sets[i].set_index = i;
    sets[i].checks.resize(set_size);
    for (auto& c : sets[i].checks) {
      c.base = base_dist(rng);
      if (c.base >= 360.0) c.base = 0.0;
      // A degenerate interval has no spread to draw from.
      c.range = init_range.lo == init_range.hi ? init_range.lo : range_dist(rng);
      c.range = std::clamp(c.range, init_range.lo, init_range.hi);
    }
  }
  return AngleSetBank(std::move(sets), set_size, seed, range_min);
}

AngleSetBank permute_sets(const AngleSetBank& bank, std::span<const std::size_t> order) {
  if (order.size() != bank.num_sets()) throw ShapeMismatch("permutation length mismatch");
  std::vector<bool> seen(order.size(), false);
  std::vector<AngleSet> sets;
  sets.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= order.size() || seen[order[i]]) throw ConfigError("not a permutation");
    seen[order[i]] = true;
    sets.push_back(bank.sets()[order[i]]);
    sets.back().set_index = i;
  }
  return AngleSetBank(std::move(sets), bank.set_size(), bank.seed(), bank.range_min());
}

double circular_distance(double a, double b) {
  const double d = std::fabs(a - b);
  return std::min(d, 360.0 - d);
}

bool check_fires(const AngleCheck& check, double angle) {
  return circular_distance(angle, check.base) <= check.range;
}

std::size_t window_count(std::size_t sequence_length, std::size_t set_size) {
  return sequence_length < set_size ? 0 : sequence_length - set_size + 1;
}

HistogramCounts forward_counts(const AngleSetBank& bank, const AngleSequence& seq,
                               FiredTrace* trace) {
  const auto n_sets = bank.num_sets();
  const auto size = bank.set_size();
  const auto bins = bank.bins();
  const auto windows = window_count(seq.size(), size);
  const auto angles = seq.values();

  HistogramCounts out{n_sets, bins, windows, std::vector<std::uint64_t>(n_sets * bins, 0)};
  if (trace) {
    trace->num_sets = n_sets;
    trace->num_windows = windows;
    trace->indices.assign(n_sets * windows, 0);
  }
  for (std::size_t i = 0; i < n_sets; ++i) {
    const auto& checks = bank.sets()[i].checks;
    auto* row = out.counts.data() + i * bins;
    for (std::size_t j = 0; j < windows; ++j) {
      std::uint32_t index = 0;
      for (std::size_t k = 0; k < size; ++k) {
        if (check_fires(checks[k], angles[j + k])) index |= std::uint32_t{1} << k;
      }
      ++row[index];
      if (trace) trace->indices[i * windows + j] = index;
    }
  }
  return out;
}

FeatureTensor normalize_histograms(const HistogramCounts& counts) {
  FeatureTensor t;
  t.num_sets = counts.num_sets;
  t.bins = counts.bins;
  t.values.assign(counts.num_sets * counts.bins, 0.0);
  t.window_counts.assign(counts.num_sets, 0);
  t.sequence_too_short = counts.windows == 0;
  for (std::size_t i = 0; i < counts.num_sets; ++i) {
    std::uint64_t total = 0;
    for (std::size_t b = 0; b < counts.bins; ++b) total += counts.counts[i * counts.bins + b];
    t.window_counts[i] = static_cast<std::size_t>(total);
    if (total == 0) continue;
    const double denom = static_cast<double>(total);
    for (std::size_t b = 0; b < counts.bins; ++b) {
      t.values[i * counts.bins + b] = static_cast<double>(counts.counts[i * counts.bins + b]) / denom;
    }
  }
  return t;
}

ForwardResult forward(const AngleSetBank& bank, const AngleSequence& seq) {
  ForwardResult result;
  const auto counts = forward_counts(bank, seq, &result.trace);
  result.features = normalize_histograms(counts);
  return result;
}

namespace {

void check_shapes(const AngleSetBank& bank, const FiredTrace& trace, const BinGradient& grad) {
  if (grad.num_sets != bank.num_sets() || grad.bins != bank.bins() ||
      grad.values.size() != bank.feature_size()) {
    throw ShapeMismatch("bin gradient is " + std::to_string(grad.num_sets) + "x" +
                        std::to_string(grad.bins) + ", bank expects " +
                        std::to_string(bank.num_sets()) + "x" + std::to_string(bank.bins()));
  }
  if (trace.num_sets != bank.num_sets() ||
      trace.indices.size() != trace.num_sets * trace.num_windows) {
    throw ShapeMismatch("fired trace does not match the bank");
  }
}

}  // namespace

void accumulate_range_updates(AngleSetBank& bank, const FiredTrace& trace,
                              const BinGradient& grad) {
  check_shapes(bank, trace, grad);
  const auto size = bank.set_size();
  for (std::size_t i = 0; i < bank.num_sets(); ++i) {
    for (std::size_t j = 0; j < trace.num_windows; ++j) {
      const auto index = trace.index(i, j);
      const double g = grad.at(i, index);
      for (std::size_t k = 0; k < size; ++k) {
        if ((index >> k) & 1U) bank.add_update(i, k, g);
      }
    }
  }
}

void apply_range_updates(AngleSetBank& bank, double range_lr, SignMode mode) {
  const double sign = mode == SignMode::PaperLiteral ? 1.0 : -1.0;
  for (std::size_t i = 0; i < bank.num_sets(); ++i) {
    for (std::size_t k = 0; k < bank.set_size(); ++k) {
      const auto& c = bank.check(i, k);
      bank.set_range(i, k, c.range + sign * range_lr * c.range_update);
    }
  }
  bank.reset_updates();
}

void backward(AngleSetBank& bank, const AngleSequence& seq, const FiredTrace& trace,
              const BinGradient& grad, double range_lr, SignMode mode) {
  if (trace.num_windows != window_count(seq.size(), bank.set_size())) {
    throw ShapeMismatch("fired trace was not produced from this sequence");
  }
  bank.reset_updates();
  accumulate_range_updates(bank, trace, grad);
  apply_range_updates(bank, range_lr, mode);
}

BinGradient renormalize_gradient(const FeatureTensor& tensor, const BinGradient& upstream) {
  if (upstream.num_sets != tensor.num_sets || upstream.bins != tensor.bins ||
      upstream.values.size() != tensor.values.size()) {
    throw ShapeMismatch("upstream gradient shape does not match feature tensor");
  }
  auto out = BinGradient::zeros(tensor.num_sets, tensor.bins);
  for (std::size_t i = 0; i < tensor.num_sets; ++i) {
    const auto total = tensor.window_counts[i];
    if (total == 0) continue;
    double mean = 0.0;
    for (std::size_t c = 0; c < tensor.bins; ++c) mean += upstream.at(i, c) * tensor.at(i, c);
    const double inv = 1.0 / static_cast<double>(total);
    for (std::size_t b = 0; b < tensor.bins; ++b) {
      out.at(i, b) = (upstream.at(i, b) - mean) * inv;
    }
  }
  return out;
}

}  // namespace scanpath
