#include "speechjudge/core/style.h"

#include <algorithm>

#include "speechjudge/core/errors.h"

namespace speechjudge {

std::string_view to_string(StyleCategory category) {
  switch (category) {
    case StyleCategory::kEmotion:
      return "emotion";
    case StyleCategory::kGender:
      return "gender";
    case StyleCategory::kVoice:
      return "voice";
  }
  return "?";
}

StyleCategory parse_style_category(std::string_view text) {
  if (text == "emotion") return StyleCategory::kEmotion;
  if (text == "gender") return StyleCategory::kGender;
  if (text == "voice") return StyleCategory::kVoice;
  throw ConfigError("unknown style category: " + std::string(text));
}

std::optional<Polarity> emotion_polarity(std::string_view emotion) {
  if (emotion == "happy" || emotion == "surprised") return Polarity::kPositive;
  if (emotion == "sad" || emotion == "fearful" || emotion == "angry") {
    return Polarity::kNegative;
  }
  return std::nullopt;
}

bool is_emotion(std::string_view label) {
  return std::ranges::find(kEmotionVocabulary, label) !=
         std::end(kEmotionVocabulary);
}

bool is_gender(std::string_view label) {
  return std::ranges::find(kGenderVocabulary, label) !=
         std::end(kGenderVocabulary);
}

bool is_valid_style_label(StyleCategory category, std::string_view label,
                          std::span<const std::string> voice_roster) {
  switch (category) {
    case StyleCategory::kEmotion:
      return is_emotion(label);
    case StyleCategory::kGender:
      return is_gender(label);
    case StyleCategory::kVoice:
      if (label.empty()) return false;
      if (label == kNeutral || voice_roster.empty()) return true;
      return std::ranges::find(voice_roster, label) != voice_roster.end();
  }
  return false;
}

std::string describe_style(const StyleControlSpec& style) {
  if (style.mixed) {
    return "a " + style.target_label + " " + style.gender_label.value_or("?") +
           " voice";
  }
  switch (style.category) {
    case StyleCategory::kEmotion:
      return "a " + style.target_label + " tone";
    case StyleCategory::kGender:
      return "a " + style.target_label + " voice";
    case StyleCategory::kVoice:
      if (style.target_label == kNeutral) return "a neutral voice";
      return style.target_label + "'s voice";
  }
  return style.target_label;
}

}  // namespace speechjudge
