#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

#include "speechjudge/core/record.h"

namespace speechjudge::filter {

/// ceil(chars / 4): the fallback when no tokenizer is plugged in.
std::int64_t chars_per_four_estimate(std::string_view text);

/// Token accounting for the combined text+speech length cap.
struct TokenBudget {
  std::function<std::int64_t(std::string_view)> text_estimator =
      chars_per_four_estimate;
  /// Audio tokens per second of speech; 0 counts responses by their text only.
  double speech_tokens_per_second = 0.0;
  std::int64_t max_tokens = 4096;

  std::int64_t estimate_text(std::string_view text) const;
  std::int64_t estimate_response(const SpeechResponse& response) const;
};

}  // namespace speechjudge::filter
