#include "speechjudge/core/validate.h"

#include <fmt/format.h>

namespace speechjudge {
namespace {

void check_response(const SpeechResponse& r, std::string_view side,
                    std::span<const std::string> roster,
                    std::vector<std::string>& out) {
  if (r.audio_ref.empty()) out.push_back(fmt::format("{}: empty audio_ref", side));
  if (r.duration_s < 0.0) {
    out.push_back(fmt::format("{}: negative duration_s {}", side, r.duration_s));
  }
  if (r.filtered && r.duration_s < kMinFilteredDurationS) {
    out.push_back(fmt::format(
        "{}: duration_s {} is below the {} s minimum for filtered responses",
        side, r.duration_s, kMinFilteredDurationS));
  }
  if (r.wer && !r.transcript) {
    out.push_back(fmt::format("{}: wer present without transcript", side));
  }
  if (r.wer && *r.wer < 0.0) {
    out.push_back(fmt::format("{}: negative wer {}", side, *r.wer));
  }
  if (r.token_estimate < 0) {
    out.push_back(fmt::format("{}: negative token_estimate", side));
  }
  if (r.style) {
    const auto& s = *r.style;
    if (!is_valid_style_label(s.category, s.target_label, roster)) {
      out.push_back(fmt::format("{}: style target '{}' not valid for {}", side,
                                s.target_label, to_string(s.category)));
    }
    if (s.mixed) {
      if (s.category != StyleCategory::kEmotion || !s.gender_label ||
          !is_gender(*s.gender_label)) {
        out.push_back(fmt::format(
            "{}: mixed style needs an emotion target and a gender label", side));
      }
    } else if (s.gender_label) {
      out.push_back(
          fmt::format("{}: gender_label set on a non-mixed style", side));
    }
  }
}

}  // namespace

std::vector<std::string> validate_record(
    const PreferenceRecord& record, std::span<const std::string> voice_roster) {
  std::vector<std::string> out;
  if (record.id.empty()) out.emplace_back("empty record id");

  for (const auto& [aspect, label] : record.labels) {
    if (!record.rationales.contains(aspect)) {
      out.push_back(fmt::format("aspect {} has a label but no rationale",
                                to_string(aspect)));
    }
  }
  for (const auto& [aspect, text] : record.rationales) {
    if (!record.labels.contains(aspect)) {
      out.push_back(fmt::format("aspect {} has a rationale but no label",
                                to_string(aspect)));
    } else if (text.empty() && !record.pending_rationales.contains(aspect)) {
      out.push_back(fmt::format("aspect {} has an empty rationale that is not "
                                "marked pending",
                                to_string(aspect)));
    }
  }
  for (const auto& aspect : record.pending_rationales) {
    if (!record.labels.contains(aspect)) {
      out.push_back(fmt::format("pending rationale for unlabeled aspect {}",
                                to_string(aspect)));
    }
  }

  if (record.task_format == TaskFormat::kSemantic) {
    for (const auto& aspect : semantic_aspects()) {
      if (!record.labels.contains(aspect)) {
        out.push_back(fmt::format("semantic record lacks aspect {}",
                                  to_string(aspect)));
      }
    }
    for (const auto& [aspect, label] : record.labels) {
      if (!aspect.is_semantic()) {
        out.push_back(fmt::format("semantic record carries acoustic aspect {}",
                                  to_string(aspect)));
      }
    }
  } else {
    bool has_speech = false;
    for (const auto& [aspect, label] : record.labels) {
      has_speech = has_speech || !aspect.is_semantic();
    }
    if (!has_speech) {
      out.emplace_back(
          "acoustic record lacks a speech_instruction_following label");
    }
  }

  check_response(record.response_1, "response_1", voice_roster, out);
  check_response(record.response_2, "response_2", voice_roster, out);
  return out;
}

}  // namespace speechjudge
