#include "speechjudge/filter/filter.h"

#include "speechjudge/core/errors.h"
#include "speechjudge/filter/classifier.h"
#include "speechjudge/filter/wer.h"

namespace speechjudge::filter {

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::kMathOrCode:
      return "math_or_code";
    case DropReason::kNonTargetLanguage:
      return "non_target_language";
    case DropReason::kHighWer:
      return "high_wer";
    case DropReason::kTooShortAudio:
      return "too_short_audio";
    case DropReason::kTooLongSequence:
      return "too_long_sequence";
  }
  return "?";
}

DropReason parse_drop_reason(std::string_view text) {
  for (auto r : {DropReason::kMathOrCode, DropReason::kNonTargetLanguage,
                 DropReason::kHighWer, DropReason::kTooShortAudio,
                 DropReason::kTooLongSequence}) {
    if (to_string(r) == text) return r;
  }
  throw DomainError("unknown drop reason: " + std::string(text));
}

namespace {

FilterOutcome drop(FilterOutcome outcome, DropReason reason) {
  outcome.kept = false;
  outcome.drop_reason = reason;
  return outcome;
}

}  // namespace

FilterOutcome filter_utterance(const SpeechResponse& response,
                               std::string_view instruction,
                               const FilterContext& context,
                               std::int64_t extra_context_tokens) {
  if (!response.transcript) {
    throw PreconditionError("filter_utterance needs a transcript for " +
                            response.audio_ref);
  }
  if (context.classifier == nullptr || context.detector == nullptr) {
    throw PreconditionError("filter context lacks a classifier or detector");
  }

  FilterOutcome outcome;
  outcome.word_count = normalize_words(*response.transcript).size();

  if (is_math_or_code(instruction, response.source_text, *context.classifier,
                      context.cache)) {
    return drop(outcome, DropReason::kMathOrCode);
  }

  for (auto text : {instruction, std::string_view(response.source_text)}) {
    if (screen_language(text, *context.detector, context.target_language,
                        context.cache) == ScreenDecision::kDrop) {
      return drop(outcome, DropReason::kNonTargetLanguage);
    }
  }

  const double wer = response.wer
                         ? *response.wer
                         : word_error_rate(response.source_text, *response.transcript);
  outcome.measured_wer = wer;
  if (wer > wer_threshold(outcome.word_count)) {
    return drop(outcome, DropReason::kHighWer);
  }

  if (response.duration_s < context.min_duration_s) {
    return drop(outcome, DropReason::kTooShortAudio);
  }

  const std::int64_t combined = context.budget.estimate_text(instruction) +
                                response.token_estimate + extra_context_tokens;
  if (combined > context.budget.max_tokens) {
    return drop(outcome, DropReason::kTooLongSequence);
  }
  return outcome;
}

nlohmann::json filter_report_row(std::string_view record_id,
                                 const FilterOutcome& outcome) {
  return {{"record_id", record_id},
          {"kept", outcome.kept},
          {"drop_reason", outcome.drop_reason
                              ? nlohmann::json(to_string(*outcome.drop_reason))
                              : nlohmann::json(nullptr)},
          {"measured_wer", outcome.measured_wer
                               ? nlohmann::json(*outcome.measured_wer)
                               : nlohmann::json(nullptr)},
          {"word_count", outcome.word_count}};
}

}  // namespace speechjudge::filter
