#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "speechjudge/core/label.h"
#include "speechjudge/core/rng.h"
#include "speechjudge/core/style.h"

namespace speechjudge::pairs {

/// Pairwise label from two absolute 1-5 ratings of the same aspect.
/// Throws DomainError for scores outside [1, 5].
ComparisonLabel scores_to_pairwise(int score_1, int score_2);

/// Labels that count as not following a `target` style request, in a fixed
/// order. Emotion: the opposite polarity plus neutral. Gender: the other
/// gender. Voice: neutral plus every other roster voice.
/// Throws DomainError when `target` is not a requestable label.
std::vector<std::string> incorrect_label_set(StyleCategory category,
                                             std::string_view target,
                                             std::span<const std::string> voice_roster = {});

/// Incorrect styles for a full spec. For mixed specs this is every
/// (emotion, gender) combination other than the target in which the emotion
/// is the target or one of its incorrect emotions.
std::vector<StyleControlSpec> incorrect_styles(const StyleControlSpec& target,
                                               std::span<const std::string> voice_roster = {});

enum class PlanKind { kCorrectCorrect, kCorrectIncorrect, kIncorrectIncorrect };

std::string_view to_string(PlanKind kind);

struct PairPlan {
  StyleControlSpec style_1;
  StyleControlSpec style_2;
  ComparisonLabel acoustic_label = ComparisonLabel::kTie;
  PlanKind plan_kind = PlanKind::kCorrectCorrect;
};

inline constexpr double kCorrectCorrectProbability = 0.8;
inline constexpr double kCorrectIncorrectProbability = 0.1;

/// Draws how the two responses of an acoustic instance are styled.
/// 8:1:1 over correct-correct, correct-incorrect and incorrect-incorrect; a
/// fair coin picks the correct side; incorrect styles are drawn uniformly and
/// independently.
PairPlan sample_pair_plan(const StyleControlSpec& target, Rng& rng,
                          std::span<const std::string> voice_roster = {});

/// Whether `style` satisfies a request for `target`.
bool style_matches(const StyleControlSpec& style, const StyleControlSpec& target);

}  // namespace speechjudge::pairs
