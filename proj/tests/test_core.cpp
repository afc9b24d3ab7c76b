#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lilhdoc/core.hpp"
#include "lilhdoc/env.hpp"

using namespace lilhdoc;

namespace {

BanditInstance synthetic() {
  return BanditInstance({0.007, 0.006, 0.005, 0.003, 0.002, 0.001}, 0.004, "synthetic");
}

}  // namespace

TEST(BanditInstance, RejectsEmptyMeans) {
  EXPECT_THROW(BanditInstance({}, 0.5), config_error);
}

TEST(BanditInstance, RejectsThresholdOutsideOpenInterval) {
  EXPECT_THROW(BanditInstance({0.5}, 0.0), config_error);
  EXPECT_THROW(BanditInstance({0.5}, 1.0), config_error);
  EXPECT_THROW(BanditInstance({0.5}, std::nan("")), config_error);
}

TEST(BanditInstance, RejectsMeanOutsideUnitInterval) {
  EXPECT_THROW(BanditInstance({0.5, 1.1}, 0.5), config_error);
  EXPECT_THROW(BanditInstance({-0.1}, 0.5), config_error);
  EXPECT_NO_THROW(BanditInstance({0.0, 1.0}, 0.5));
}

TEST(BanditInstance, Accessors) {
  const auto inst = synthetic();
  EXPECT_EQ(inst.arm_count(), 6u);
  EXPECT_EQ(inst.good_count(), 3u);
  EXPECT_EQ(inst.name(), "synthetic");
  EXPECT_DOUBLE_EQ(inst.pair_gap(0, 5), 0.006);
  EXPECT_NEAR(inst.gap(3), 0.001, 1e-15);
  EXPECT_THROW((void)inst.mean(6), std::out_of_range);
}

TEST(BanditInstance, MinGapCombinesThresholdAndPairGaps) {
  // threshold gaps 0.3, 0.1, 0.3; adjacent halves 0.1, 0.1
  const BanditInstance a({0.8, 0.6, 0.2}, 0.5);
  EXPECT_NEAR(a.min_gap(), 0.1, 1e-12);
  // adjacent half-gap dominates, order of arms irrelevant
  const BanditInstance b({0.1, 0.9, 0.92}, 0.5);
  EXPECT_NEAR(b.min_gap(), 0.01, 1e-12);
}

TEST(GroundTruth, SyntheticInstancePartition) {
  const auto truth = ground_truth(synthetic());
  EXPECT_EQ(truth.good, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(truth.bad, (std::vector<std::size_t>{3, 4, 5}));
}

TEST(GroundTruth, EqualityCountsAsGood) {
  const auto truth = ground_truth(BanditInstance({0.5}, 0.5));
  EXPECT_EQ(truth.good, (std::vector<std::size_t>{0}));
  EXPECT_TRUE(truth.bad.empty());
}

TEST(GroundTruth, Gaps) {
  const auto truth = ground_truth(BanditInstance({0.9, 0.1}, 0.5));
  ASSERT_EQ(truth.gaps.size(), 2u);
  EXPECT_NEAR(truth.gaps[0], 0.4, 1e-15);
  EXPECT_NEAR(truth.gaps[1], 0.4, 1e-15);
}

TEST(GroundTruth, PartitionProperty) {
  Xoshiro256StarStar rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 1 + rng.next() % 20;
    std::vector<double> means(k);
    for (auto& m : means) m = std::floor(rng.next_unit() * 10.0) / 10.0;  // forces ties
    const double xi = 0.05 + 0.9 * rng.next_unit();
    const BanditInstance inst(means, xi);
    const auto truth = ground_truth(inst);
    std::vector<std::size_t> all = truth.good;
    all.insert(all.end(), truth.bad.begin(), truth.bad.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(k);
    std::iota(expected.begin(), expected.end(), 0);
    ASSERT_EQ(all, expected);
    for (std::size_t i : truth.good) ASSERT_GE(means[i], xi);
    for (std::size_t i : truth.bad) ASSERT_LT(means[i], xi);
    for (double g : truth.gaps) ASSERT_GE(g, 0.0);
  }
}

TEST(ArmState, RecordsRewards) {
  ArmState s;
  EXPECT_THROW((void)s.mean(), std::logic_error);
  s.record(1);
  s.record(0);
  s.record(1);
  s.record(1);
  EXPECT_EQ(s.pulls, 4u);
  EXPECT_EQ(s.reward_sum, 3u);
  EXPECT_DOUBLE_EQ(s.mean(), 0.75);
}

TEST(Algorithm, ParseRoundTrip) {
  for (Algorithm a : {Algorithm::LilHDoC, Algorithm::HDoC, Algorithm::LUCBG}) {
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  }
  EXPECT_THROW(parse_algorithm("aptg"), config_error);
}

TEST(AlgoConfig, LilHDoCRequiresDeltaBelowInverseE) {
  AlgoConfig c{Algorithm::LilHDoC, std::exp(-1.0), 0, kDefaultBudget};
  try {
    c.validate(6);
    FAIL() << "expected config_error";
  } catch (const config_error& e) {
    EXPECT_STREQ(e.what(), "delta must be strictly below 1/e");
  }
  c.delta = 0.3678;
  EXPECT_NO_THROW(c.validate(6));
}

TEST(AlgoConfig, LilHDoCRequiresTwoArms) {
  const AlgoConfig c{Algorithm::LilHDoC, 0.01, 0, kDefaultBudget};
  try {
    c.validate(1);
    FAIL() << "expected config_error";
  } catch (const config_error& e) {
    EXPECT_STREQ(e.what(), "instance too small for lil'HDoC parameterization");
  }
}

TEST(AlgoConfig, BaselinesAcceptDeltaBelowOne) {
  AlgoConfig c{Algorithm::HDoC, 0.9, 0, kDefaultBudget};
  EXPECT_NO_THROW(c.validate(1));
  c.delta = 1.0;
  EXPECT_THROW(c.validate(1), config_error);
  c.delta = 0.0;
  EXPECT_THROW(c.validate(1), config_error);
}

TEST(AlgoConfig, BudgetMustCoverEveryArm) {
  const AlgoConfig c{Algorithm::HDoC, 0.1, 0, 3};
  EXPECT_THROW(c.validate(4), config_error);
  EXPECT_NO_THROW(c.validate(3));
}

TEST(ScoreOutcome, AllCorrect) {
  const BanditInstance inst({0.9, 0.1}, 0.5);
  RunOutcome o;
  o.events = {{0, Label::Good, 5, 3, 3}, {1, Label::Bad, 7, 4, 0}};
  EXPECT_FALSE(score_outcome(o, inst));
}

TEST(ScoreOutcome, GoodArmLabeledBad) {
  const BanditInstance inst({0.9, 0.1}, 0.5);
  RunOutcome o;
  o.events = {{0, Label::Bad, 5, 3, 0}};
  EXPECT_TRUE(score_outcome(o, inst));
}

TEST(ScoreOutcome, TruncationIsNotAnError) {
  const BanditInstance inst({0.9, 0.5}, 0.5);
  RunOutcome o;
  o.events = {{0, Label::Good, 5, 3, 3}};
  o.truncated = true;
  EXPECT_FALSE(score_outcome(o, inst));
  EXPECT_TRUE(o.truncated);
}

TEST(Aggregate, MeanAndSampleStddev) {
  std::vector<RunOutcome> runs(3);
  runs[0].tau_lambda = {10, 20};
  runs[0].tau_stop = 30;
  runs[1].tau_lambda = {20};
  runs[1].tau_stop = 40;
  runs[2].tau_lambda = {30, 40};
  runs[2].truncated = true;
  const auto stats = aggregate(runs, 100.0);
  EXPECT_EQ(stats.runs, 3u);
  EXPECT_DOUBLE_EQ(stats.scale_divisor, 100.0);
  ASSERT_EQ(stats.tau_lambda.size(), 2u);
  EXPECT_DOUBLE_EQ(stats.tau_lambda[0].mean, 20.0);
  EXPECT_DOUBLE_EQ(stats.tau_lambda[0].stddev, 10.0);
  EXPECT_EQ(stats.tau_lambda[0].runs, 3u);
  EXPECT_DOUBLE_EQ(stats.tau_lambda[1].mean, 30.0);
  EXPECT_EQ(stats.tau_lambda[1].runs, 2u);
  EXPECT_EQ(stats.tau_lambda[1].not_reached, 1u);
  EXPECT_EQ(stats.tau_lambda[1].truncated, 0u);
  EXPECT_DOUBLE_EQ(stats.tau_stop.mean, 35.0);
  EXPECT_EQ(stats.tau_stop.runs, 2u);
  EXPECT_EQ(stats.tau_stop.truncated, 1u);
}

TEST(Aggregate, SingleRunHasZeroStddev) {
  std::vector<RunOutcome> runs(1);
  runs[0].tau_lambda = {7};
  runs[0].tau_stop = 9;
  const auto stats = aggregate(runs);
  EXPECT_EQ(stats.tau_stop.stddev, 0.0);
  EXPECT_EQ(stats.tau_lambda[0].stddev, 0.0);
}

TEST(Aggregate, TruncatedBeforeMilestoneIsCountedSeparately) {
  std::vector<RunOutcome> runs(2);
  runs[0].tau_lambda = {5};
  runs[0].tau_stop = 8;
  runs[1].truncated = true;
  const auto stats = aggregate(runs);
  EXPECT_EQ(stats.tau_lambda[0].runs, 1u);
  EXPECT_EQ(stats.tau_lambda[0].truncated, 1u);
  EXPECT_EQ(stats.tau_lambda[0].not_reached, 0u);
}

TEST(Aggregate, StddevNonnegativeProperty) {
  Xoshiro256StarStar rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RunOutcome> runs(1 + rng.next() % 12);
    for (auto& r : runs) {
      const std::uint64_t base = 1 + rng.next() % 1000;
      r.tau_lambda = {base, base + rng.next() % 1000};
      r.tau_stop = r.tau_lambda.back() + rng.next() % 10;
    }
    const auto stats = aggregate(runs);
    for (const auto& s : stats.tau_lambda) {
      ASSERT_GE(s.stddev, 0.0);
      ASSERT_EQ(s.runs + s.not_reached + s.truncated, runs.size());
    }
    ASSERT_GE(stats.tau_stop.stddev, 0.0);
  }
}
