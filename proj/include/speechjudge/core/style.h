#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace speechjudge {

enum class StyleCategory : std::uint8_t { kEmotion, kGender, kVoice };

enum class Polarity : std::uint8_t { kPositive, kNegative };

inline constexpr std::string_view kNeutral = "neutral";

/// Every emotion label a response may be synthesized with.
inline constexpr std::string_view kEmotionVocabulary[] = {
    "happy", "surprised", "sad", "fearful", "angry", "neutral"};

/// Emotions that carry a polarity and can therefore be requested as targets.
inline constexpr std::string_view kPolarEmotions[] = {
    "happy", "surprised", "sad", "fearful", "angry"};

inline constexpr std::string_view kGenderVocabulary[] = {"male", "female"};

/// Speaking-style control attached to one synthesized response.
///
/// For joint emotion+gender control `mixed` is set, `category` is emotion,
/// `target_label` holds the emotion and `gender_label` the gender.
struct StyleControlSpec {
  StyleCategory category = StyleCategory::kEmotion;
  std::string target_label;
  bool mixed = false;
  std::optional<std::string> gender_label;

  bool operator==(const StyleControlSpec&) const = default;
};

std::string_view to_string(StyleCategory category);
StyleCategory parse_style_category(std::string_view text);

/// Polarity of a polar emotion; std::nullopt for neutral or unknown labels.
std::optional<Polarity> emotion_polarity(std::string_view emotion);

bool is_emotion(std::string_view label);
bool is_gender(std::string_view label);

/// True when `label` is a legal value for `category`. Voices are legal when
/// they are "neutral" or appear in `voice_roster`; an empty roster accepts any
/// non-empty voice name.
bool is_valid_style_label(StyleCategory category, std::string_view label,
                          std::span<const std::string> voice_roster = {});

/// Human-readable description, e.g. "happy", "male", "a happy female voice".
std::string describe_style(const StyleControlSpec& style);

}  // namespace speechjudge
