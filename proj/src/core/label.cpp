#include "speechjudge/core/label.h"

#include <algorithm>
#include <cctype>
#include <string>

#include "speechjudge/core/errors.h"

namespace speechjudge {

std::string_view to_string(ComparisonLabel label) {
  switch (label) {
    case ComparisonLabel::kWin:
      return "win";
    case ComparisonLabel::kLose:
      return "lose";
    case ComparisonLabel::kTie:
      return "tie";
  }
  return "?";
}

ComparisonLabel parse_label(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "win") return ComparisonLabel::kWin;
  if (lower == "lose") return ComparisonLabel::kLose;
  if (lower == "tie") return ComparisonLabel::kTie;
  throw DomainError("unknown comparison label: " + std::string(text));
}

std::string_view answer_token(ComparisonLabel label) {
  switch (label) {
    case ComparisonLabel::kWin:
      return "1";
    case ComparisonLabel::kLose:
      return "2";
    case ComparisonLabel::kTie:
      return "Tie";
  }
  return "?";
}

}  // namespace speechjudge
