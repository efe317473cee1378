#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace speechjudge {

enum class AspectKind : std::uint8_t {
  kHelpfulness,
  kHonesty,
  kInstructionFollowing,
  kTruthfulness,
  kSpeechInstructionFollowing,
};

/// Refinement of speech instruction following by what the speaker was asked
/// to control.
enum class SpeechSubKind : std::uint8_t {
  kEmotion,
  kGender,
  kVoice,
  kImplicitEmotion,
  kMixed,
};

/// One judgment dimension. A sub-kind is carried iff the kind is speech
/// instruction following; the factories enforce this.
class Aspect {
 public:
  static Aspect semantic(AspectKind kind);
  static Aspect speech(SpeechSubKind sub_kind);

  static Aspect helpfulness() { return semantic(AspectKind::kHelpfulness); }
  static Aspect honesty() { return semantic(AspectKind::kHonesty); }
  static Aspect instruction_following() {
    return semantic(AspectKind::kInstructionFollowing);
  }
  static Aspect truthfulness() { return semantic(AspectKind::kTruthfulness); }

  AspectKind kind() const { return kind_; }
  std::optional<SpeechSubKind> sub_kind() const { return sub_kind_; }
  bool is_semantic() const {
    return kind_ != AspectKind::kSpeechInstructionFollowing;
  }

  auto operator<=>(const Aspect&) const = default;

 private:
  Aspect(AspectKind kind, std::optional<SpeechSubKind> sub_kind)
      : kind_(kind), sub_kind_(sub_kind) {}

  AspectKind kind_;
  std::optional<SpeechSubKind> sub_kind_;
};

/// helpfulness, honesty, instruction following, truthfulness.
std::array<Aspect, 4> semantic_aspects();
std::array<Aspect, 5> speech_aspects();

/// Stable identifier used in files, e.g. "honesty" or
/// "speech_instruction_following/gender".
std::string to_string(Aspect aspect);

/// Inverse of to_string. Throws ConfigError on unknown names or sub-kinds.
Aspect parse_aspect(std::string_view text);

std::string_view to_string(SpeechSubKind sub_kind);
SpeechSubKind parse_sub_kind(std::string_view text);

/// The text substituted into the judge prompt's aspect slot.
std::string aspect_prompt_name(Aspect aspect);

/// Short column header used in report tables.
std::string aspect_short_name(Aspect aspect);

}  // namespace speechjudge
