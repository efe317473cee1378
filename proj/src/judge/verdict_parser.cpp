#include "speechjudge/judge/verdict_parser.h"

#include <optional>
#include <regex>
#include <string>

#include "speechjudge/core/text.h"

namespace speechjudge::judge {
namespace {

std::optional<ComparisonLabel> token_label(std::string_view token) {
  const auto t = to_lower(token);
  if (t == "1") return ComparisonLabel::kWin;
  if (t == "2") return ComparisonLabel::kLose;
  if (t == "tie") return ComparisonLabel::kTie;
  return std::nullopt;
}

std::string strip_answer_prefix(std::string text) {
  text = trim(text);
  for (std::string_view prefix : {"answer:", "final answer:"}) {
    if (to_lower(text).ends_with(prefix)) {
      text = trim(std::string_view(text).substr(0, text.size() - prefix.size()));
    }
  }
  return text;
}

}  // namespace

Verdict parse_verdict(std::string_view raw, bool order_swapped) {
  Verdict verdict;
  verdict.raw_completion = std::string(raw);
  verdict.order_swapped = order_swapped;
  const std::string text(raw);

  static const std::regex kAnswerTag(
      R"(<answer>\s*\[?\s*(1|2|tie)\s*\]?\s*</answer>)", std::regex::icase);
  std::smatch last;
  bool found = false;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kAnswerTag);
       it != std::sregex_iterator(); ++it) {
    last = *it;
    found = true;
  }

  std::optional<ComparisonLabel> label;
  std::string rest;
  if (found) {
    label = token_label(last[1].str());
    rest = text.substr(0, static_cast<std::size_t>(last.position(0))) +
           text.substr(static_cast<std::size_t>(last.position(0) + last.length(0)));
  } else {
    // Fallback: the completion ends in a bare answer token.
    std::string body = trim(text);
    while (!body.empty() && (body.back() == '.' || body.back() == '!')) body.pop_back();
    const auto cut = body.find_last_of(" \t\n");
    std::string token = cut == std::string::npos ? body : body.substr(cut + 1);
    std::string stripped = token;
    const std::string_view wrap = "*\"'[]()";
    while (!stripped.empty() && wrap.find(stripped.front()) != std::string_view::npos) {
      stripped.erase(stripped.begin());
    }
    while (!stripped.empty() && wrap.find(stripped.back()) != std::string_view::npos) {
      stripped.pop_back();
    }
    label = token_label(stripped);
    if (label) rest = cut == std::string::npos ? std::string() : body.substr(0, cut);
  }

  if (!label) return verdict;
  verdict.label = order_swapped ? invert_label(*label) : *label;
  verdict.rationale = strip_answer_prefix(rest);
  if (verdict.rationale.empty()) verdict.rationale = trim(text);
  return verdict;
}

}  // namespace speechjudge::judge
