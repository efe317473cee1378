#include "speechjudge/core/aspect.h"

#include "speechjudge/core/errors.h"

namespace speechjudge {

Aspect Aspect::semantic(AspectKind kind) {
  if (kind == AspectKind::kSpeechInstructionFollowing) {
    throw DomainError(
        "speech instruction following requires a sub-kind; use "
        "Aspect::speech");
  }
  return Aspect(kind, std::nullopt);
}

Aspect Aspect::speech(SpeechSubKind sub_kind) {
  return Aspect(AspectKind::kSpeechInstructionFollowing, sub_kind);
}

std::array<Aspect, 4> semantic_aspects() {
  return {Aspect::helpfulness(), Aspect::honesty(),
          Aspect::instruction_following(), Aspect::truthfulness()};
}

std::array<Aspect, 5> speech_aspects() {
  return {Aspect::speech(SpeechSubKind::kEmotion),
          Aspect::speech(SpeechSubKind::kGender),
          Aspect::speech(SpeechSubKind::kVoice),
          Aspect::speech(SpeechSubKind::kImplicitEmotion),
          Aspect::speech(SpeechSubKind::kMixed)};
}

std::string_view to_string(SpeechSubKind sub_kind) {
  switch (sub_kind) {
    case SpeechSubKind::kEmotion:
      return "emotion";
    case SpeechSubKind::kGender:
      return "gender";
    case SpeechSubKind::kVoice:
      return "voice";
    case SpeechSubKind::kImplicitEmotion:
      return "implicit_emotion";
    case SpeechSubKind::kMixed:
      return "mixed";
  }
  throw ConfigError("unknown speech sub-kind");
}

SpeechSubKind parse_sub_kind(std::string_view text) {
  if (text == "emotion") return SpeechSubKind::kEmotion;
  if (text == "gender") return SpeechSubKind::kGender;
  if (text == "voice") return SpeechSubKind::kVoice;
  if (text == "implicit_emotion") return SpeechSubKind::kImplicitEmotion;
  if (text == "mixed") return SpeechSubKind::kMixed;
  throw ConfigError("unknown speech sub-kind: " + std::string(text));
}

std::string to_string(Aspect aspect) {
  switch (aspect.kind()) {
    case AspectKind::kHelpfulness:
      return "helpfulness";
    case AspectKind::kHonesty:
      return "honesty";
    case AspectKind::kInstructionFollowing:
      return "instruction_following";
    case AspectKind::kTruthfulness:
      return "truthfulness";
    case AspectKind::kSpeechInstructionFollowing:
      return "speech_instruction_following/" +
             std::string(to_string(*aspect.sub_kind()));
  }
  throw ConfigError("unknown aspect kind");
}

Aspect parse_aspect(std::string_view text) {
  if (text == "helpfulness") return Aspect::helpfulness();
  if (text == "honesty") return Aspect::honesty();
  if (text == "instruction_following") return Aspect::instruction_following();
  if (text == "truthfulness") return Aspect::truthfulness();
  constexpr std::string_view kSpeechPrefix = "speech_instruction_following/";
  if (text.starts_with(kSpeechPrefix)) {
    return Aspect::speech(parse_sub_kind(text.substr(kSpeechPrefix.size())));
  }
  throw ConfigError("unknown aspect: " + std::string(text));
}

std::string aspect_prompt_name(Aspect aspect) {
  switch (aspect.kind()) {
    case AspectKind::kHelpfulness:
      return "helpfulness";
    case AspectKind::kHonesty:
      return "honesty";
    case AspectKind::kInstructionFollowing:
      return "instruction following";
    case AspectKind::kTruthfulness:
      return "truthfulness";
    case AspectKind::kSpeechInstructionFollowing:
      break;
  }
  switch (*aspect.sub_kind()) {
    case SpeechSubKind::kEmotion:
    case SpeechSubKind::kImplicitEmotion:
      return "emotion instruction following";
    case SpeechSubKind::kGender:
      return "gender instruction following";
    case SpeechSubKind::kVoice:
      return "character instruction following";
    case SpeechSubKind::kMixed:
      return "emotion and gender instruction following";
  }
  throw ConfigError("aspect has no prompt name");
}

std::string aspect_short_name(Aspect aspect) {
  switch (aspect.kind()) {
    case AspectKind::kHelpfulness:
      return "Help.";
    case AspectKind::kHonesty:
      return "Hon.";
    case AspectKind::kInstructionFollowing:
      return "Inst.";
    case AspectKind::kTruthfulness:
      return "Truth.";
    case AspectKind::kSpeechInstructionFollowing:
      break;
  }
  switch (*aspect.sub_kind()) {
    case SpeechSubKind::kEmotion:
      return "Emo.";
    case SpeechSubKind::kGender:
      return "Gen.";
    case SpeechSubKind::kVoice:
      return "Voi.";
    case SpeechSubKind::kImplicitEmotion:
      return "Imp.";
    case SpeechSubKind::kMixed:
      return "Mixed";
  }
  return "?";
}

}  // namespace speechjudge
