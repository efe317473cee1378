#include "speechjudge/pairs/plan.h"

#include <algorithm>

#include <fmt/format.h>

#include "speechjudge/core/errors.h"

namespace speechjudge::pairs {

ComparisonLabel scores_to_pairwise(int score_1, int score_2) {
  for (int s : {score_1, score_2}) {
    if (s < 1 || s > 5) throw DomainError(fmt::format("score {} outside [1, 5]", s));
  }
  if (score_1 > score_2) return ComparisonLabel::kWin;
  if (score_1 < score_2) return ComparisonLabel::kLose;
  return ComparisonLabel::kTie;
}

std::vector<std::string> incorrect_label_set(StyleCategory category,
                                             std::string_view target,
                                             std::span<const std::string> voice_roster) {
  std::vector<std::string> out;
  switch (category) {
    case StyleCategory::kEmotion: {
      const auto polarity = emotion_polarity(target);
      if (!polarity) {
        throw DomainError(fmt::format("'{}' is not a polar emotion", target));
      }
      for (auto e : kPolarEmotions) {
        if (emotion_polarity(e) != polarity) out.emplace_back(e);
      }
      out.emplace_back(kNeutral);
      break;
    }
    case StyleCategory::kGender:
      if (!is_gender(target)) {
        throw DomainError(fmt::format("'{}' is not a gender label", target));
      }
      out.emplace_back(target == "male" ? "female" : "male");
      break;
    case StyleCategory::kVoice: {
      const bool listed = std::find(voice_roster.begin(), voice_roster.end(),
                                    target) != voice_roster.end();
      if (!listed) {
        throw DomainError(fmt::format("voice '{}' is not in the roster", target));
      }
      out.emplace_back(kNeutral);
      for (const auto& v : voice_roster) {
        if (v != target) out.push_back(v);
      }
      break;
    }
  }
  return out;
}

std::vector<StyleControlSpec> incorrect_styles(const StyleControlSpec& target,
                                               std::span<const std::string> voice_roster) {
  std::vector<StyleControlSpec> out;
  if (!target.mixed) {
    for (auto& label : incorrect_label_set(target.category, target.target_label, voice_roster)) {
      out.push_back(StyleControlSpec{target.category, std::move(label), false, std::nullopt});
    }
    return out;
  }
  if (!target.gender_label || !is_gender(*target.gender_label)) {
    throw DomainError("mixed style target needs a gender label");
  }
  std::vector<std::string> emotions{target.target_label};
  for (auto& e : incorrect_label_set(StyleCategory::kEmotion, target.target_label)) {
    emotions.push_back(std::move(e));
  }
  for (const auto& emotion : emotions) {
    for (auto gender : kGenderVocabulary) {
      if (emotion == target.target_label && gender == *target.gender_label) continue;
      out.push_back(StyleControlSpec{StyleCategory::kEmotion, emotion, true,
                                     std::string(gender)});
    }
  }
  return out;
}

std::string_view to_string(PlanKind kind) {
  switch (kind) {
    case PlanKind::kCorrectCorrect: return "correct_correct";
    case PlanKind::kCorrectIncorrect: return "correct_incorrect";
    case PlanKind::kIncorrectIncorrect: return "incorrect_incorrect";
  }
  return "?";
}

PairPlan sample_pair_plan(const StyleControlSpec& target, Rng& rng,
                          std::span<const std::string> voice_roster) {
  const auto wrong = incorrect_styles(target, voice_roster);
  auto draw_wrong = [&] { return wrong[uniform_index(rng, wrong.size())]; };

  PairPlan plan;
  const double u = unit_uniform(rng);
  if (u < kCorrectCorrectProbability) {
    plan.plan_kind = PlanKind::kCorrectCorrect;
    plan.style_1 = plan.style_2 = target;
    plan.acoustic_label = ComparisonLabel::kTie;
  } else if (u < kCorrectCorrectProbability + kCorrectIncorrectProbability) {
    plan.plan_kind = PlanKind::kCorrectIncorrect;
    if (fair_coin(rng)) {
      plan.style_1 = target;
      plan.style_2 = draw_wrong();
      plan.acoustic_label = ComparisonLabel::kWin;
    } else {
      plan.style_1 = draw_wrong();
      plan.style_2 = target;
      plan.acoustic_label = ComparisonLabel::kLose;
    }
  } else {
    plan.plan_kind = PlanKind::kIncorrectIncorrect;
    plan.style_1 = draw_wrong();
    plan.style_2 = draw_wrong();
    plan.acoustic_label = ComparisonLabel::kTie;
  }
  return plan;
}

bool style_matches(const StyleControlSpec& style, const StyleControlSpec& target) {
  return style == target;
}

}  // namespace speechjudge::pairs
