#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "speechjudge/core/record.h"
#include "speechjudge/filter/language.h"
#include "speechjudge/filter/token_budget.h"
#include "speechjudge/judge/clients.h"

namespace speechjudge::pipeline {
class CallCache;
}

namespace speechjudge::filter {

enum class DropReason {
  kMathOrCode,
  kNonTargetLanguage,
  kHighWer,
  kTooShortAudio,
  kTooLongSequence,
};

std::string_view to_string(DropReason reason);
DropReason parse_drop_reason(std::string_view text);

struct FilterOutcome {
  bool kept = true;
  std::optional<DropReason> drop_reason;
  std::optional<double> measured_wer;
  /// Words in the transcript, which selects the WER threshold.
  std::size_t word_count = 0;

  bool operator==(const FilterOutcome&) const = default;
};

struct FilterContext {
  judge::ChatClient* classifier = nullptr;
  LanguageDetector* detector = nullptr;
  std::string target_language = "en";
  TokenBudget budget;
  double min_duration_s = kMinFilteredDurationS;
  pipeline::CallCache* cache = nullptr;
};

/// Runs the screening stages in order (math/code, language, WER against the
/// length-dependent threshold, minimum duration, combined token cap) and stops
/// at the first failure. `extra_context_tokens` counts whatever else shares the
/// judge context with this response, typically the other response.
///
/// Throws PreconditionError when the transcript is missing or a hook is not
/// configured.
FilterOutcome filter_utterance(const SpeechResponse& response,
                               std::string_view instruction,
                               const FilterContext& context,
                               std::int64_t extra_context_tokens = 0);

/// {record_id, kept, drop_reason, measured_wer, word_count}
nlohmann::json filter_report_row(std::string_view record_id,
                                 const FilterOutcome& outcome);

}  // namespace speechjudge::filter
