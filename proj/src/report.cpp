#include "scanpath/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace scanpath {

using nlohmann::json;

const SplitScore* RunReport::split(const std::string& name) const {
  for (const auto& s : splits) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<ClassScore> class_scores(const std::vector<std::string>& classes,
                                     std::span<const std::size_t> truth,
                                     std::span<const std::size_t> predicted) {
  const std::size_t n = classes.size();
  std::vector<std::size_t> hits(n, 0), predicted_count(n, 0), support(n, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++support[truth[i]];
    ++predicted_count[predicted[i]];
    if (truth[i] == predicted[i]) ++hits[truth[i]];
  }
  std::vector<ClassScore> out;
  for (std::size_t c = 0; c < n; ++c) {
    ClassScore s{classes[c], 0.0, 0.0, support[c]};
    if (predicted_count[c] > 0) s.precision = double(hits[c]) / double(predicted_count[c]);
    if (support[c] > 0) s.recall = double(hits[c]) / double(support[c]);
    out.push_back(s);
  }
  return out;
}

json reproducible_json(const RunReport& r) {
  json splits = json::object();
  for (const auto& s : r.splits) {
    splits[s.name] = {{"correct", s.correct}, {"total", s.total}, {"accuracy", s.accuracy()}};
  }
  json per_class = json::array();
  for (const auto& c : r.per_class) {
    per_class.push_back({{"label", c.label},
                         {"precision", c.precision},
                         {"recall", c.recall},
                         {"support", c.support}});
  }
  json history = json::array();
  for (const auto& e : r.history) {
    history.push_back({{"epoch", e.epoch},
                       {"learning_rate", e.learning_rate},
                       {"train_loss", e.train_loss},
                       {"train_accuracy", e.train_accuracy},
                       {"validation_loss", e.validation_loss},
                       {"validation_accuracy", e.validation_accuracy}});
  }
  return {{"format", "scanpath-report"},
          {"version", 1},
          {"command", r.command},
          {"config", r.config},
          {"seed", r.seed},
          {"classes", r.classes},
          {"splits", splits},
          {"per_class_split", r.per_class_split},
          {"per_class", per_class},
          {"best_epoch", r.best_epoch},
          {"history", history}};
}

json to_json(const RunReport& r) {
  auto j = reproducible_json(r);
  j["wall_clock_seconds"] = r.wall_clock_seconds;
  return j;
}

std::string format_accuracy(double accuracy) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", accuracy);
  return buf;
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string render_table(const RunReport& r) {
  std::ostringstream out;
  out << r.command << " report (seed " << r.seed << ")\n\n";
  out << pad("split", 12) << pad("accuracy", 10) << "correct/total\n";
  for (const auto& s : r.splits) {
    out << pad(s.name, 12) << pad(format_accuracy(s.accuracy()), 10) << s.correct << "/"
        << s.total << "\n";
  }
  if (!r.per_class.empty()) {
    std::size_t width = 7;
    for (const auto& c : r.per_class) width = std::max(width, c.label.size() + 2);
    out << "\nper class (" << r.per_class_split << ")\n";
    out << pad("class", width) << pad("precision", 11) << pad("recall", 8) << "support\n";
    for (const auto& c : r.per_class) {
      out << pad(c.label, width) << pad(format_accuracy(c.precision), 11)
          << pad(format_accuracy(c.recall), 8) << c.support << "\n";
    }
  }
  if (r.command == "train") {
    out << "\nbest epoch " << r.best_epoch << " of " << r.history.size() << "\n";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "wall clock %.1f s\n", r.wall_clock_seconds);
  out << buf;
  return out.str();
}

double SweepCell::mean() const {
  if (validation_accuracies.empty()) return 0.0;
  double sum = 0.0;
  for (double a : validation_accuracies) sum += a;
  return sum / static_cast<double>(validation_accuracies.size());
}

json to_json(const SweepResult& r) {
  json cells = json::array();
  for (const auto& c : r.cells) {
    json cell = {{"num_sets", c.num_sets},
                 {"set_size", c.set_size},
                 {"validation_accuracies", c.validation_accuracies},
                 {"errors", c.errors}};
    cell["mean_validation_accuracy"] = c.failed() ? json(nullptr) : json(c.mean());
    cells.push_back(cell);
  }
  json j = {{"format", "scanpath-sweep"},
            {"version", 1},
            {"base_config", r.base_config},
            {"repeats", r.repeats},
            {"cells", cells}};
  j["best"] = r.best ? json({{"num_sets", r.cells[*r.best].num_sets},
                             {"set_size", r.cells[*r.best].set_size},
                             {"mean_validation_accuracy", r.cells[*r.best].mean()}})
                     : json(nullptr);
  return j;
}

std::string render_sweep_table(const SweepResult& r) {
  std::ostringstream out;
  out << pad("Angle sets", 12) << pad("Set size", 10) << "Validation accuracy (mean of "
      << r.repeats << ")\n";
  for (const auto& c : r.cells) {
    out << pad(std::to_string(c.num_sets), 12) << pad(std::to_string(c.set_size), 10);
    if (c.failed()) {
      out << "failed: " << (c.errors.empty() ? std::string("no runs") : c.errors.front());
    } else {
      out << format_accuracy(c.mean());
      if (!c.errors.empty()) out << "  (" << c.errors.size() << " repeats failed)";
    }
    out << "\n";
  }
  if (r.best) {
    const auto& b = r.cells[*r.best];
    out << "\nbest: " << b.num_sets << " angle sets, set size " << b.set_size << " ("
        << format_accuracy(b.mean()) << ")\n";
  } else {
    out << "\nbest: none (every cell failed)\n";
  }
  return out.str();
}

}  // namespace scanpath
