#include "speechjudge/filter/token_budget.h"

#include <cmath>

namespace speechjudge::filter {

std::int64_t chars_per_four_estimate(std::string_view text) {
  return static_cast<std::int64_t>((text.size() + 3) / 4);
}

std::int64_t TokenBudget::estimate_text(std::string_view text) const {
  return text_estimator ? text_estimator(text) : chars_per_four_estimate(text);
}

std::int64_t TokenBudget::estimate_response(const SpeechResponse& response) const {
  auto tokens = estimate_text(response.source_text);
  if (speech_tokens_per_second > 0.0) {
    tokens += static_cast<std::int64_t>(
        std::ceil(response.duration_s * speech_tokens_per_second));
  }
  return tokens;
}

}  // namespace speechjudge::filter
