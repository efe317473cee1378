#include "speechjudge/reward/reward.h"

#include <cmath>
#include <numeric>
#include <string>

#include "speechjudge/core/errors.h"
#include "speechjudge/core/text.h"

namespace speechjudge::reward {

void RewardConfig::validate() const {
  if (alpha < 0.0 || gamma < 0.0) throw ConfigError("reward weights must be >= 0");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
  if (score_min > score_max) throw ConfigError("score_min exceeds score_max");
}

double accuracy_reward(double predicted, double truth, const RewardConfig& cfg) {
  const double diff = predicted - truth;
  if (std::abs(diff) > kAccuracyCutoff) return 0.0;
  return std::exp(-(diff * diff) / (2.0 * cfg.sigma * cfg.sigma));
}

namespace {

struct Block {
  std::size_t open = 0;   // position of '<tag>'
  std::size_t body = 0;   // first char of content
  std::size_t close = 0;  // position of '</tag>'
  std::size_t end = 0;    // one past '</tag>'
};

std::size_t count(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::optional<Block> sole_block(std::string_view text, std::string_view tag) {
  const std::string open = "<" + std::string(tag) + ">";
  const std::string close = "</" + std::string(tag) + ">";
  if (count(text, open) != 1 || count(text, close) != 1) return std::nullopt;
  Block b;
  b.open = text.find(open);
  b.body = b.open + open.size();
  b.close = text.find(close);
  if (b.close < b.body) return std::nullopt;
  b.end = b.close + close.size();
  return b;
}

bool is_blank(std::string_view text) { return trim(text).empty(); }

}  // namespace

int format_reward(std::string_view completion) {
  auto think = sole_block(completion, "think");
  auto answer = sole_block(completion, "answer");
  if (!think || !answer || think->end > answer->open) return 0;
  if (!is_blank(completion.substr(0, think->open))) return 0;
  if (!is_blank(completion.substr(think->end, answer->open - think->end))) return 0;
  if (!is_blank(completion.substr(answer->end))) return 0;
  if (is_blank(completion.substr(answer->body, answer->close - answer->body))) return 0;
  return 1;
}

std::optional<std::string> extract_answer(std::string_view completion) {
  auto answer = sole_block(completion, "answer");
  if (!answer) return std::nullopt;
  return trim(completion.substr(answer->body, answer->close - answer->body));
}

std::optional<int> parse_score(std::string_view answer_text) {
  const std::string text = trim(answer_text);
  if (text.empty()) return std::nullopt;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (!is_blank(std::string_view(text).substr(used)) || !std::isfinite(value)) {
    return std::nullopt;
  }
  const double nearest = std::round(value);
  if (std::abs(value - nearest) >= 0.5) return std::nullopt;
  return static_cast<int>(nearest);
}

RewardBreakdown combined_reward(std::optional<double> predicted, double truth,
                                std::string_view completion,
                                const RewardConfig& cfg) {
  RewardBreakdown out;
  out.score_valid = predicted.has_value();
  out.accuracy_reward = predicted ? accuracy_reward(*predicted, truth, cfg) : 0.0;
  out.format_reward = format_reward(completion);
  out.combined = cfg.alpha * out.accuracy_reward + cfg.gamma * out.format_reward;
  return out;
}

RewardBreakdown score_completion(std::string_view completion, int truth,
                                 const RewardConfig& cfg) {
  std::optional<double> predicted;
  if (auto answer = extract_answer(completion)) {
    if (auto score = parse_score(*answer)) predicted = *score;
  }
  return combined_reward(predicted, truth, completion, cfg);
}

std::vector<double> group_advantages(std::span<const double> rewards, double epsilon) {
  if (rewards.size() < 2) {
    throw DomainError("group advantages need at least two rewards");
  }
  const double n = static_cast<double>(rewards.size());
  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double sq = 0.0;
  for (double r : rewards) sq += (r - mean) * (r - mean);
  const double stddev = std::sqrt(sq / n);
  std::vector<double> out(rewards.size(), 0.0);
  if (stddev < epsilon) return out;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    out[i] = (rewards[i] - mean) / stddev;
  }
  return out;
}

void assign_group_advantages(std::span<RewardBreakdown> group, double epsilon) {
  std::vector<double> rewards;
  rewards.reserve(group.size());
  for (const auto& g : group) rewards.push_back(g.combined);
  const auto adv = group_advantages(rewards, epsilon);
  for (std::size_t i = 0; i < group.size(); ++i) group[i].advantage = adv[i];
}

ComparisonLabel compare_scores(double score_1, double score_2) {
  if (score_1 > score_2) return ComparisonLabel::kWin;
  if (score_1 < score_2) return ComparisonLabel::kLose;
  return ComparisonLabel::kTie;
}

nlohmann::json reward_table(double sigma) {
  RewardConfig cfg;
  cfg.sigma = sigma;
  cfg.validate();
  nlohmann::json rows = nlohmann::json::array();
  for (int d = 0; d <= 4; ++d) {
    rows.push_back({{"difference", d}, {"accuracy_reward", accuracy_reward(d, 0.0, cfg)}});
  }
  return {{"sigma", sigma}, {"rows", rows}};
}

}  // namespace speechjudge::reward
