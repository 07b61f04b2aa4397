#include "scanpath/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "scanpath/error.hpp"
#include "scanpath/text.hpp"

namespace scanpath {

std::string_view to_string(ClassTarget target) {
  return target == ClassTarget::Subject ? "subject" : "stimulus";
}

ClassTarget parse_class_target(std::string_view name) {
  if (name == "subject") return ClassTarget::Subject;
  if (name == "stimulus") return ClassTarget::Stimulus;
  throw ConfigError("unknown class target '" + std::string(name) +
                    "' (expected subject or stimulus)");
}

const std::string& DatasetManifest::label_of(const ManifestEntry& e) const {
  return class_target == ClassTarget::Subject ? e.subject_id() : e.stimulus_id();
}

const std::string& DatasetManifest::group_of(const ManifestEntry& e) const {
  return class_target == ClassTarget::Subject ? e.stimulus_id() : e.subject_id();
}

std::vector<std::string> DatasetManifest::classes() const {
  std::set<std::string> labels;
  for (const auto& e : entries) labels.insert(label_of(e));
  return {labels.begin(), labels.end()};
}

DatasetManifest load_manifest(const std::filesystem::path& path, ClassTarget target) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open manifest " + path.string());
  const auto base = path.parent_path();

  DatasetManifest manifest;
  manifest.class_target = target;
  std::vector<std::string> failures;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::split_csv(line);
    if (first) {
      first = false;
      if (fields.size() == 3 && fields[0] == "path" && fields[1] == "subject_id" &&
          fields[2] == "stimulus_id") {
        continue;
      }
    }
    const auto where = path.string() + ":" + std::to_string(line_no);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      throw ParseError(where + ": malformed row, expected path,subject_id,stimulus_id");
    }
    const auto file = base / std::filesystem::path(std::string(fields[0]));
    if (!std::filesystem::exists(file)) {
      failures.push_back(where + ": missing file " + file.string());
      continue;
    }
    try {
      auto rec = read_gaze_csv(file, std::string(fields[1]), std::string(fields[2]));
      if (rec.size() < 2) {
        failures.push_back(where + ": " + file.string() + " has fewer than 2 samples");
        continue;
      }
      manifest.entries.push_back({file, std::move(rec)});
    } catch (const Error& e) {
      failures.push_back(where + ": " + e.what());
    }
  }
  if (!failures.empty()) {
    std::string msg = "manifest " + path.string() + " has " +
                      std::to_string(failures.size()) + " bad entr" +
                      (failures.size() == 1 ? "y" : "ies") + ":";
    for (const auto& f : failures) msg += "\n  " + f;
    throw ParseError(msg);
  }
  if (manifest.entries.empty()) throw ParseError("manifest " + path.string() + " is empty");
  if (manifest.classes().size() < 2) {
    throw ParseError("manifest " + path.string() + ": need >= 2 classes under target " +
                     std::string(to_string(target)));
  }
  return manifest;
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, const GazeRecording*>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "path,subject_id,stimulus_id\n";
  for (const auto& [file, rec] : rows) {
    out << file << ',' << rec->subject_id() << ',' << rec->stimulus_id() << '\n';
  }
}

namespace {

DatasetManifest subset(const DatasetManifest& m, ClassTarget target,
                       const std::vector<bool>& keep, bool want) {
  DatasetManifest out;
  out.class_target = target;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    if (keep[i] == want) out.entries.push_back(m.entries[i]);
  }
  return out;
}

}  // namespace

ManifestSplit split_disjoint(const DatasetManifest& manifest, ClassTarget target,
                             double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("split fraction must lie in (0, 1)");
  }
  const auto& entries = manifest.entries;

  std::map<std::string, std::set<std::string>> groups_per_class;
  std::set<std::string> group_set;
  for (const auto& e : entries) {
    const auto& label = target == ClassTarget::Subject ? e.subject_id() : e.stimulus_id();
    const auto& group = target == ClassTarget::Subject ? e.stimulus_id() : e.subject_id();
    groups_per_class[label].insert(group);
    group_set.insert(group);
  }
  if (groups_per_class.size() < 2) {
    throw InfeasibleSplit("need >= 2 classes to split, found " +
                          std::to_string(groups_per_class.size()));
  }
  std::vector<std::string> lonely;
  for (const auto& [label, groups] : groups_per_class) {
    if (groups.size() < 2) lonely.push_back(label);
  }
  if (!lonely.empty()) {
    std::string msg = "infeasible disjoint split: class";
    msg += lonely.size() == 1 ? " " : "es ";
    for (std::size_t i = 0; i < lonely.size(); ++i) msg += (i ? ", " : "") + lonely[i];
    msg += " occur" + std::string(lonely.size() == 1 ? "s" : "") + " under a single " +
           (target == ClassTarget::Subject ? "stimulus" : "subject");
    throw InfeasibleSplit(msg);
  }

  std::vector<std::string> groups(group_set.begin(), group_set.end());
  const auto n = groups.size();
  const auto n_train = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))), 1, n - 1);

  std::mt19937_64 rng(seed);
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::shuffle(groups.begin(), groups.end(), rng);
    const std::set<std::string> train_groups(groups.begin(), groups.begin() + n_train);
    bool covers = true;
    for (const auto& [label, gs] : groups_per_class) {
      std::size_t in_train = 0;
      for (const auto& g : gs) in_train += train_groups.count(g);
      if (in_train == 0 || in_train == gs.size()) {
        covers = false;
        break;
      }
    }
    if (!covers) continue;
    std::vector<bool> keep(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& group =
          target == ClassTarget::Subject ? entries[i].stimulus_id() : entries[i].subject_id();
      keep[i] = train_groups.count(group) > 0;
    }
    return {subset(manifest, target, keep, true), subset(manifest, target, keep, false)};
  }
  throw InfeasibleSplit("no partition of " + std::to_string(n) +
                        " groups puts every class on both sides");
}

ManifestSplit random_holdout(const DatasetManifest& manifest, double fraction,
                             std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("holdout fraction must lie in (0, 1)");
  }
  const auto n = manifest.entries.size();
  const auto n_hold =
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> held(n, false);
  for (std::size_t i = 0; i < n_hold; ++i) held[order[i]] = true;
  return {subset(manifest, manifest.class_target, held, false),
          subset(manifest, manifest.class_target, held, true)};
}

}  // namespace scanpath
