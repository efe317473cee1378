#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace speechjudge {

/// Outcome of a pairwise comparison, always read relative to Response 1.
enum class ComparisonLabel : std::uint8_t { kWin, kLose, kTie };

/// Judge output label; std::nullopt marks an invalid (unparseable) verdict.
using VerdictLabel = std::optional<ComparisonLabel>;

constexpr ComparisonLabel invert_label(ComparisonLabel label) {
  switch (label) {
    case ComparisonLabel::kWin:
      return ComparisonLabel::kLose;
    case ComparisonLabel::kLose:
      return ComparisonLabel::kWin;
    case ComparisonLabel::kTie:
      return ComparisonLabel::kTie;
  }
  return label;
}

constexpr VerdictLabel invert_label(VerdictLabel label) {
  if (!label) return label;
  return invert_label(*label);
}

std::string_view to_string(ComparisonLabel label);

/// Accepts "win", "lose", "tie" (case-insensitive). Throws DomainError.
ComparisonLabel parse_label(std::string_view text);

/// "1", "2" or "Tie": the answer token a judge emits for a label.
std::string_view answer_token(ComparisonLabel label);

inline constexpr ComparisonLabel kAllLabels[] = {
    ComparisonLabel::kWin, ComparisonLabel::kLose, ComparisonLabel::kTie};

}  // namespace speechjudge
