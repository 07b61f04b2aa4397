#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "scanpath/commands.hpp"
#include "scanpath/error.hpp"
#include "scanpath/synthetic.hpp"
#include "scanpath/training.hpp"

namespace scanpath {
namespace {

struct Data {
  std::vector<LabeledSequence> train;
  std::vector<LabeledSequence> validation;
};

// Two classes whose dominant directions are half a turn apart.
Data separated_data() {
  SyntheticSpec spec;
  spec.classes = {{"A", {{45.0, 8.0, 1.0}}, 0.5}, {"B", {{225.0, 8.0, 1.0}}, 0.5}};
  spec.recordings_per_class = 100;
  spec.groups = 4;
  const auto manifest = synthetic_manifest(spec, 11);
  const auto classes = manifest.classes();
  const auto split = split_disjoint(manifest, ClassTarget::Stimulus, 0.5, 1);
  const auto holdout = random_holdout(split.train, 0.2, 2);
  return {labeled_sequences(holdout.train, classes), labeled_sequences(holdout.test, classes)};
}

TrainSchedule short_schedule() {
  TrainSchedule s;
  s.total_epochs = 30;
  s.switch_epoch = 20;
  return s;
}

Mlp small_net(const AngleSetBank& bank, std::uint64_t seed) {
  return Mlp({bank.feature_size(), {32}, 2, Activation::ReLU, seed});
}

TEST(Train, SeparatedClassesReachNinetyPercentWithinThirtyEpochs) {
  const auto data = separated_data();
  ASSERT_GE(data.validation.size(), 20u);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto bank = init_bank(64, 3, seed);
    const auto result = train(bank, small_net(bank, seed + 10), data.train, data.validation,
                              short_schedule(), {}, seed + 20);
    EXPECT_GE(result.best_validation_accuracy, 0.9) << "seed " << seed;
    EXPECT_LE(result.best_epoch, 30u);
  }
}

TEST(Train, FrozenBankStillConverges) {
  const auto data = separated_data();
  const auto bank = init_bank(64, 3, 4);
  RangeTraining frozen;
  frozen.range_lr = 0.0;
  const auto result =
      train(bank, small_net(bank, 5), data.train, data.validation, short_schedule(), frozen, 6);
  EXPECT_GE(result.best_validation_accuracy, 0.9);
  EXPECT_EQ(result.bank, bank);
  EXPECT_LT(result.history.back().train_loss, result.history.front().train_loss);
}

TEST(Train, TrainableRangesMove) {
  const auto data = separated_data();
  const auto bank = init_bank(16, 2, 4);
  RangeTraining ranges;
  ranges.range_lr = 1.0;
  const auto result =
      train(bank, small_net(bank, 5), data.train, data.validation, short_schedule(), ranges, 6);
  EXPECT_NE(result.bank, bank);
  for (std::size_t s = 0; s < result.bank.num_sets(); ++s) {
    for (std::size_t k = 0; k < result.bank.set_size(); ++k) {
      const double r = result.bank.check(s, k).range;
      EXPECT_GE(r, kDefaultRangeMin);
      EXPECT_LE(r, kRangeMax);
    }
  }
}

TEST(Train, ZeroEpochsReturnsInitialState) {
  const auto data = separated_data();
  const auto bank = init_bank(8, 2, 1);
  const auto net = small_net(bank, 2);
  auto schedule = short_schedule();
  schedule.total_epochs = 0;
  const auto result = train(bank, net, data.train, data.validation, schedule, {}, 3);
  EXPECT_TRUE(result.history.empty());
  EXPECT_EQ(result.best_epoch, 0u);
  EXPECT_EQ(result.bank, bank);
  EXPECT_EQ(result.network, net);
}

TEST(Train, BitReproducible) {
  const auto data = separated_data();
  const auto bank = init_bank(32, 3, 7);
  RangeTraining ranges;
  ranges.range_lr = 0.5;
  auto schedule = short_schedule();
  schedule.total_epochs = 8;
  schedule.switch_epoch = 4;
  const auto a = train(bank, small_net(bank, 8), data.train, data.validation, schedule, ranges, 9);
  const auto b = train(bank, small_net(bank, 8), data.train, data.validation, schedule, ranges, 9);
  EXPECT_EQ(a.bank, b.bank);
  EXPECT_EQ(a.network, b.network);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].train_loss, b.history[i].train_loss);
    EXPECT_EQ(a.history[i].validation_loss, b.history[i].validation_loss);
  }
  const auto c = train(bank, small_net(bank, 8), data.train, data.validation, schedule, ranges, 10);
  EXPECT_NE(a.history.front().train_loss, c.history.front().train_loss);
}

TEST(Train, LearningRateDropsAtSwitchEpoch) {
  const auto data = separated_data();
  const auto bank = init_bank(8, 2, 1);
  auto schedule = short_schedule();
  schedule.total_epochs = 6;
  schedule.switch_epoch = 4;
  const auto result = train(bank, small_net(bank, 2), data.train, data.validation, schedule, {}, 3);
  ASSERT_EQ(result.history.size(), 6u);
  for (const auto& rec : result.history) {
    EXPECT_EQ(rec.learning_rate, rec.epoch <= 4 ? schedule.lr_initial : schedule.lr_reduced);
  }
}

TEST(Train, SelectsEarliestEpochWithBestValidationAccuracy) {
  const auto data = separated_data();
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const auto bank = init_bank(16, 3, seed);
    auto schedule = short_schedule();
    schedule.total_epochs = 12;
    schedule.switch_epoch = 6;
    RangeTraining ranges;
    ranges.range_lr = 0.1;
    const auto result =
        train(bank, small_net(bank, seed), data.train, data.validation, schedule, ranges, seed);
    const auto best = std::max_element(
        result.history.begin(), result.history.end(),
        [](const auto& a, const auto& b) { return a.validation_accuracy < b.validation_accuracy; });
    EXPECT_EQ(result.best_epoch, best->epoch);
    EXPECT_EQ(result.best_validation_accuracy, best->validation_accuracy);
    EXPECT_EQ(evaluate(result.bank, result.network, data.validation).accuracy(),
              result.best_validation_accuracy);
  }
}

// One full-batch step at a small rate with frozen ranges must not raise the
// loss on that batch.
TEST(Train, FirstSmallStepDoesNotIncreaseLoss) {
  const auto data = separated_data();
  const auto bank = init_bank(16, 3, 3);
  std::vector<std::vector<double>> features;
  for (const auto& item : data.train) features.push_back(forward(bank, item.angles).features.values);
  const double n = static_cast<double>(features.size());

  auto batch_loss = [&](const Mlp& net) {
    double sum = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
      sum += cross_entropy(net.predict(features[i]), data.train[i].label);
    }
    return sum / n;
  };

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Mlp net({bank.feature_size(), {16, 8}, 2, Activation::ReLU, seed});
    std::vector<double> grad(net.parameter_count(), 0.0);
    for (std::size_t i = 0; i < features.size(); ++i) {
      const auto g = net.backward(net.forward(features[i]), data.train[i].label);
      for (std::size_t p = 0; p < grad.size(); ++p) grad[p] += g.parameters[p] / n;
    }
    const double before = batch_loss(net);
    SgdMomentum(net.parameter_count(), 0.9).step(net.parameters(), grad, 1e-4);
    EXPECT_LE(batch_loss(net), before) << "init seed " << seed;
  }
}

TEST(Train, RejectsBadInputs) {
  const auto data = separated_data();
  const auto bank = init_bank(8, 2, 1);
  const auto schedule = short_schedule();

  const Mlp wrong({bank.feature_size() + 1, {4}, 2, Activation::ReLU, 0});
  EXPECT_THROW(train(bank, wrong, data.train, data.validation, schedule, {}, 0), ShapeMismatch);

  const std::vector<LabeledSequence> empty;
  EXPECT_THROW(train(bank, small_net(bank, 0), empty, data.validation, schedule, {}, 0), Error);
  EXPECT_THROW(train(bank, small_net(bank, 0), data.train, empty, schedule, {}, 0), Error);

  std::vector<LabeledSequence> one_class;
  for (const auto& item : data.train) {
    if (item.label == 0) one_class.push_back(item);
  }
  EXPECT_THROW(train(bank, small_net(bank, 0), one_class, data.validation, schedule, {}, 0),
               Error);

  auto bad = schedule;
  bad.switch_epoch = 0;
  EXPECT_THROW(train(bank, small_net(bank, 0), data.train, data.validation, bad, {}, 0),
               ConfigError);
}

TEST(Evaluate, CountsMatchPredictions) {
  const auto data = separated_data();
  const auto bank = init_bank(8, 2, 1);
  const auto net = small_net(bank, 2);
  const auto ev = evaluate(bank, net, data.validation);
  ASSERT_EQ(ev.predictions.size(), data.validation.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ev.predictions.size(); ++i) {
    correct += ev.predictions[i] == data.validation[i].label;
  }
  EXPECT_EQ(ev.correct, correct);
  EXPECT_EQ(ev.accuracy(), double(correct) / double(data.validation.size()));
}

}  // namespace
}  // namespace scanpath
