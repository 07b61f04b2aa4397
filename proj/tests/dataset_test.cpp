#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "scanpath/dataset.hpp"
#include "scanpath/error.hpp"
#include "test_util.hpp"

namespace scanpath {
namespace {

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream(p) << body;
}

TEST(LoadManifest, ThreeValidRows) {
  const auto dir = testing::temp_dir("manifest_ok");
  std::filesystem::create_directories(dir / "data");
  write_file(dir / "data/a.csv", "x,y\n0,0\n1,0\n");
  write_file(dir / "data/b.csv", "0,0\n0,1\n1,1\n");
  write_file(dir / "data/c.csv", "0,0,0\n1,1,4\r\n");
  write_file(dir / "m.csv",
             "path,subject_id,stimulus_id\ndata/a.csv,s1,img1\n"
             "data/b.csv,s2,img2\r\ndata/c.csv,s1,img2\n");
  const auto m = load_manifest(dir / "m.csv", ClassTarget::Stimulus);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m.entries[1].subject_id(), "s2");
  EXPECT_EQ(m.entries[2].recording.size(), 2u);
  EXPECT_EQ(m.classes(), (std::vector<std::string>{"img1", "img2"}));
}

TEST(LoadManifest, MissingFileIsNamed) {
  const auto dir = testing::temp_dir("manifest_missing");
  write_file(dir / "a.csv", "0,0\n1,0\n");
  write_file(dir / "m.csv", "a.csv,s1,x\nghost.csv,s2,y\n");
  try {
    load_manifest(dir / "m.csv", ClassTarget::Stimulus);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("ghost.csv"), std::string::npos) << e.what();
  }
}

TEST(LoadManifest, SingleClassRejected) {
  const auto dir = testing::temp_dir("manifest_one_class");
  write_file(dir / "a.csv", "0,0\n1,0\n");
  write_file(dir / "b.csv", "0,0\n1,1\n");
  write_file(dir / "m.csv", "a.csv,s1,img\nb.csv,s2,img\n");
  try {
    load_manifest(dir / "m.csv", ClassTarget::Stimulus);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("need >= 2 classes"), std::string::npos);
  }
  // The same rows have two subject classes.
  EXPECT_EQ(load_manifest(dir / "m.csv", ClassTarget::Subject).size(), 2u);
}

TEST(LoadManifest, MalformedEmptyAndShortFiles) {
  const auto dir = testing::temp_dir("manifest_bad");
  write_file(dir / "m1.csv", "a.csv,s1\n");
  EXPECT_THROW(load_manifest(dir / "m1.csv", ClassTarget::Stimulus), ParseError);
  write_file(dir / "m2.csv", "path,subject_id,stimulus_id\n");
  EXPECT_THROW(load_manifest(dir / "m2.csv", ClassTarget::Stimulus), ParseError);
  write_file(dir / "one.csv", "0,0\n");
  write_file(dir / "bad.csv", "0,0\nx,1\n");
  write_file(dir / "m3.csv", "one.csv,s1,a\nbad.csv,s2,b\n");
  try {
    load_manifest(dir / "m3.csv", ClassTarget::Stimulus);
    FAIL();
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("2 bad entries"), std::string::npos) << msg;
    EXPECT_NE(msg.find("one.csv"), std::string::npos);
    EXPECT_NE(msg.find("bad.csv"), std::string::npos);
  }
  EXPECT_THROW(load_manifest(dir / "nope.csv", ClassTarget::Stimulus), ParseError);
}

DatasetManifest grid(std::size_t subjects, std::size_t stimuli, ClassTarget target) {
  DatasetManifest m;
  m.class_target = target;
  for (std::size_t s = 0; s < subjects; ++s) {
    for (std::size_t t = 0; t < stimuli; ++t) {
      m.entries.push_back({{}, testing::recording_from({{0, 0}, {1, 0}})});
      m.entries.back().recording = GazeRecording(
          m.entries.back().recording.samples(), "s" + std::to_string(s), "m" + std::to_string(t));
    }
  }
  return m;
}

TEST(SplitDisjoint, SubjectTargetPartitionsStimuli) {
  const auto m = grid(10, 9, ClassTarget::Subject);
  const auto split = split_disjoint(m, ClassTarget::Subject, 0.5, 3);
  std::set<std::string> train_stim, test_stim, train_subj, test_subj;
  for (const auto& e : split.train.entries) {
    train_stim.insert(e.stimulus_id());
    train_subj.insert(e.subject_id());
  }
  for (const auto& e : split.test.entries) {
    test_stim.insert(e.stimulus_id());
    test_subj.insert(e.subject_id());
  }
  EXPECT_TRUE((train_stim.size() == 4 && test_stim.size() == 5) ||
              (train_stim.size() == 5 && test_stim.size() == 4));
  for (const auto& s : train_stim) EXPECT_EQ(test_stim.count(s), 0u);
  EXPECT_EQ(train_subj.size(), 10u);
  EXPECT_EQ(test_subj.size(), 10u);
}

TEST(SplitDisjoint, SharedSingleSubjectIsInfeasible) {
  DatasetManifest m;
  m.entries.push_back({{}, GazeRecording({{0, 0, {}}, {1, 0, {}}}, "s1", "a")});
  m.entries.push_back({{}, GazeRecording({{0, 0, {}}, {1, 0, {}}}, "s1", "b")});
  try {
    split_disjoint(m, ClassTarget::Stimulus, 0.5, 1);
    FAIL();
  } catch (const InfeasibleSplit& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("a, b"), std::string::npos) << msg;
  }
}

TEST(SplitDisjoint, DeterministicUnionAndDisjointness) {
  for (auto target : {ClassTarget::Subject, ClassTarget::Stimulus}) {
    const auto m = grid(6, 7, target);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto a = split_disjoint(m, target, 0.5, seed);
      const auto b = split_disjoint(m, target, 0.5, seed);
      ASSERT_EQ(a.train.size(), b.train.size());
      for (std::size_t i = 0; i < a.train.size(); ++i) {
        EXPECT_EQ(a.train.entries[i].recording, b.train.entries[i].recording);
      }
      EXPECT_EQ(a.train.size() + a.test.size(), m.size());

      std::multiset<std::pair<std::string, std::string>> all, parts;
      for (const auto& e : m.entries) all.insert({e.subject_id(), e.stimulus_id()});
      for (const auto* half : {&a.train, &a.test}) {
        for (const auto& e : half->entries) parts.insert({e.subject_id(), e.stimulus_id()});
      }
      EXPECT_EQ(all, parts);

      std::set<std::string> train_groups;
      for (const auto& e : a.train.entries) train_groups.insert(a.train.group_of(e));
      for (const auto& e : a.test.entries) EXPECT_EQ(train_groups.count(a.test.group_of(e)), 0u);
      EXPECT_EQ(a.train.classes(), m.classes());
      EXPECT_EQ(a.test.classes(), m.classes());
    }
  }
}

TEST(SplitDisjoint, RejectsBadFraction) {
  const auto m = grid(3, 3, ClassTarget::Subject);
  EXPECT_THROW(split_disjoint(m, ClassTarget::Subject, 0.0, 1), ConfigError);
  EXPECT_THROW(split_disjoint(m, ClassTarget::Subject, 1.0, 1), ConfigError);
}

TEST(RandomHoldout, SizeIsRoundedFraction) {
  const auto m = grid(5, 9, ClassTarget::Subject);  // 45 entries
  const auto h = random_holdout(m, 0.2, 9);
  EXPECT_EQ(h.test.size(), 9u);
  EXPECT_EQ(h.train.size(), 36u);
  const auto again = random_holdout(m, 0.2, 9);
  for (std::size_t i = 0; i < h.test.size(); ++i) {
    EXPECT_EQ(h.test.entries[i].recording, again.test.entries[i].recording);
  }
}

}  // namespace
}  // namespace scanpath
