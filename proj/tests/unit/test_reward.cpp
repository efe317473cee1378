#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "speechjudge/core/errors.h"
#include "speechjudge/reward/reward.h"

using namespace speechjudge;
using namespace speechjudge::reward;

TEST(AccuracyReward, GaussianInsideCutoff) {
  for (double sigma : {0.5, 1.0, 2.0}) {
    RewardConfig cfg;
    cfg.sigma = sigma;
    for (int k = 0; k <= 8; ++k) {
      const double d = 0.5 * k;
      EXPECT_NEAR(accuracy_reward(3.0 + d, 3.0, cfg), sjtest::gaussian_oracle(d, sigma), 1e-12);
      EXPECT_NEAR(accuracy_reward(3.0 - d, 3.0, cfg), sjtest::gaussian_oracle(d, sigma), 1e-12);
    }
  }
  EXPECT_DOUBLE_EQ(accuracy_reward(2.0, 2.0), 1.0);
}

TEST(AccuracyReward, ExactlyZeroBeyondCutoff) {
  EXPECT_EQ(accuracy_reward(4.0 + 1e-9, 0.0), 0.0);
  EXPECT_EQ(accuracy_reward(-5.0, 0.0), 0.0);
  EXPECT_GT(accuracy_reward(4.0, 0.0), 0.0);
}

TEST(FormatReward, RequiresThinkThenAnswer) {
  EXPECT_EQ(format_reward("<think>r</think><answer>3</answer>"), 1);
  EXPECT_EQ(format_reward("  <think>r</think>\n<answer> 3 </answer>\n"), 1);
  EXPECT_EQ(format_reward("<answer>3</answer><think>r</think>"), 0);
  EXPECT_EQ(format_reward("<think>r</think><answer>3</answer> trailing"), 0);
  EXPECT_EQ(format_reward("lead <think>r</think><answer>3</answer>"), 0);
  EXPECT_EQ(format_reward("<think>r</think><answer> </answer>"), 0);
  EXPECT_EQ(format_reward("<think>r</think><answer>3</answer><answer>4</answer>"), 0);
  EXPECT_EQ(format_reward("<think>r</think>x<answer>3</answer>"), 0);
  EXPECT_EQ(format_reward(""), 0);
}

TEST(ParseScore, RoundsNumericText) {
  EXPECT_EQ(parse_score("4"), 4);
  EXPECT_EQ(parse_score(" 3.2 "), 3);
  EXPECT_EQ(parse_score("4.0"), 4);
  EXPECT_FALSE(parse_score("four").has_value());
  EXPECT_FALSE(parse_score("3 stars").has_value());
  EXPECT_FALSE(parse_score("").has_value());
  EXPECT_FALSE(parse_score("nan").has_value());
}

TEST(CombinedReward, WeightsComponents) {
  RewardConfig cfg;
  cfg.alpha = 1.0;
  cfg.gamma = 0.5;
  const auto good = score_completion("<think>x</think><answer>4</answer>", 4, cfg);
  EXPECT_DOUBLE_EQ(good.combined, 1.5);
  EXPECT_TRUE(good.score_valid);

  const auto bad_format = score_completion("<answer>4</answer>", 3, cfg);
  EXPECT_EQ(bad_format.format_reward, 0);
  EXPECT_NEAR(bad_format.combined, std::exp(-0.5), 1e-12);

  const auto unparsed = score_completion("<think>x</think><answer>great</answer>", 3, cfg);
  EXPECT_FALSE(unparsed.score_valid);
  EXPECT_DOUBLE_EQ(unparsed.accuracy_reward, 0.0);
  EXPECT_DOUBLE_EQ(unparsed.combined, 0.5);
}

TEST(CombinedReward, ConfigValidation) {
  RewardConfig cfg;
  cfg.sigma = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.alpha = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.score_min = 6;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(GroupAdvantages, ZeroMeanUnitStd) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  for (int g = 0; g < 200; ++g) {
    std::vector<double> r(8);
    for (auto& x : r) x = u(gen);
    const auto a = group_advantages(r);
    double mean = 0.0, sq = 0.0;
    for (double x : a) mean += x;
    mean /= 8.0;
    for (double x : a) sq += (x - mean) * (x - mean);
    EXPECT_LE(std::fabs(mean), 1e-9);
    EXPECT_NEAR(std::sqrt(sq / 8.0), 1.0, 1e-9);
  }
}

TEST(GroupAdvantages, ConstantGroupIsAllZero) {
  const std::vector<double> r(8, 0.7);
  for (double a : group_advantages(r)) EXPECT_EQ(a, 0.0);
}

TEST(GroupAdvantages, PreservesOrderAndRejectsTinyGroups) {
  const std::vector<double> r{1.0, 3.0, 2.0};
  const auto a = group_advantages(r);
  EXPECT_LT(a[0], a[2]);
  EXPECT_LT(a[2], a[1]);
  const std::vector<double> one{1.0};
  EXPECT_THROW(group_advantages(one), DomainError);
}

TEST(GroupAdvantages, AssignFillsBreakdowns) {
  std::vector<RewardBreakdown> g(3);
  g[0].combined = 0.0;
  g[1].combined = 1.0;
  g[2].combined = 2.0;
  assign_group_advantages(g);
  EXPECT_NEAR(*g[1].advantage, 0.0, 1e-12);
  EXPECT_NEAR(*g[2].advantage, std::sqrt(1.5), 1e-12);
}

TEST(CompareScores, Ordering) {
  EXPECT_EQ(compare_scores(5, 3), ComparisonLabel::kWin);
  EXPECT_EQ(compare_scores(2, 3), ComparisonLabel::kLose);
  EXPECT_EQ(compare_scores(3, 3), ComparisonLabel::kTie);
}

TEST(RewardTable, FiveRows) {
  const auto t = reward_table(1.0);
  ASSERT_EQ(t["rows"].size(), 5u);
  EXPECT_DOUBLE_EQ(t["rows"][0]["accuracy_reward"].get<double>(), 1.0);
  EXPECT_NEAR(t["rows"][4]["accuracy_reward"].get<double>(), std::exp(-8.0), 1e-15);
  EXPECT_THROW(reward_table(-1.0), ConfigError);
}
