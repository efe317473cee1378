#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "speechjudge/core/label.h"

namespace speechjudge::reward {

struct RewardConfig {
  double alpha = 1.0;
  double gamma = 0.5;
  /// Spread of the Gaussian accuracy reward.
  double sigma = 1.0;
  int score_min = 1;
  int score_max = 5;

  /// Throws ConfigError when a weight is negative or sigma is not positive.
  void validate() const;
};

/// Score differences beyond this earn no accuracy reward.
inline constexpr double kAccuracyCutoff = 4.0;

struct RewardBreakdown {
  double accuracy_reward = 0.0;
  int format_reward = 0;
  double combined = 0.0;
  std::optional<double> advantage;
  /// False when no numeric score could be read from the completion.
  bool score_valid = true;
};

/// exp(-(predicted - truth)^2 / (2 sigma^2)) while |predicted - truth| <= 4,
/// otherwise 0.
double accuracy_reward(double predicted, double truth, const RewardConfig& cfg = {});

/// 1 iff the completion is exactly one <think>...</think> block followed by
/// exactly one <answer>...</answer> block with non-empty content, optionally
/// surrounded by whitespace.
int format_reward(std::string_view completion);

/// Content of the sole <answer> block, if the completion has one.
std::optional<std::string> extract_answer(std::string_view completion);

/// Reads a 1-5 style score from the answer text. Values within 0.5 of an
/// integer snap to it; anything else (including exact half-way values and
/// non-numeric text) is invalid.
std::optional<int> parse_score(std::string_view answer_text);

/// Combines both rewards. A missing prediction scores accuracy 0 and clears
/// score_valid.
RewardBreakdown combined_reward(std::optional<double> predicted, double truth,
                                std::string_view completion,
                                const RewardConfig& cfg = {});

/// Scores a raw completion end to end: format check, answer extraction, score
/// parse, reward combination.
RewardBreakdown score_completion(std::string_view completion, int truth,
                                 const RewardConfig& cfg = {});

/// Group-relative advantages (r_i - mean) / std with the population standard
/// deviation. A group whose std is below `epsilon` gets all-zero advantages.
/// Throws DomainError for groups smaller than 2.
std::vector<double> group_advantages(std::span<const double> rewards,
                                     double epsilon = 1e-8);

/// Fills RewardBreakdown::advantage across one sampled group.
void assign_group_advantages(std::span<RewardBreakdown> group, double epsilon = 1e-8);

/// Pointwise-to-pairwise interpretation: sign(score_1 - score_2).
ComparisonLabel compare_scores(double score_1, double score_2);

/// Rows {difference, accuracy_reward} for differences 0..4 at `sigma`.
nlohmann::json reward_table(double sigma);

}  // namespace speechjudge::reward
