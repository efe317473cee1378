#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "speechjudge/core/aspect.h"

namespace speechjudge::judge {

inline constexpr std::string_view kAudioPlaceholder = "<audio>";

enum class PromptMode {
  /// The judge's own training/inference template.
  kTrained,
  /// Same request plus a format demonstration, for untuned baseline models.
  kBaseline,
};

/// A rendered judge prompt with two ordered audio slots.
struct JudgePrompt {
  std::string text;
  /// Offsets of the two "<audio>" placeholders in `text`, in response order.
  std::array<std::size_t, 2> audio_slots{};

  /// Text-judge variant: both audio slots replaced by transcripts.
  std::string with_transcripts(std::string_view first, std::string_view second) const;
};

JudgePrompt render_judge_prompt(Aspect aspect, std::string_view instruction,
                                PromptMode mode = PromptMode::kTrained);

}  // namespace speechjudge::judge
