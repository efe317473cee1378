#pragma once

#include <string>
#include <string_view>

#include "speechjudge/core/aspect.h"
#include "speechjudge/core/label.h"
#include "speechjudge/core/style.h"
#include "speechjudge/judge/clients.h"

namespace speechjudge::pairs {

/// "Response 1 is better", "Response 2 is better" or a comparable-quality
/// statement.
std::string verdict_phrase(ComparisonLabel label);

/// Asks `llm` for a comparative rationale supporting `label` on `aspect`.
/// Optional per-response rationales from the rating stage are passed along.
/// Throws on client failure or an empty reply; callers mark the rationale
/// pending.
std::string rewrite_rationale_comparative(
    std::string_view instruction, std::string_view text_1, std::string_view text_2,
    ComparisonLabel label, Aspect aspect, judge::ChatClient& llm,
    pipeline::CallCache* cache = nullptr, std::string_view rationale_1 = "",
    std::string_view rationale_2 = "");

/// Rationale for an explicit style request, given the synthesized styles.
std::string request_acoustic_rationale(std::string_view instruction,
                                       std::string_view text_1, std::string_view text_2,
                                       const StyleControlSpec& style_1,
                                       const StyleControlSpec& style_2,
                                       ComparisonLabel label, judge::ChatClient& llm,
                                       pipeline::CallCache* cache = nullptr);

/// Rationale for an implicit-intent query: the model's explanation of the
/// implied emotional intent, then a description of each response's tone
/// relative to `target`.
std::string request_implicit_rationale(std::string_view query,
                                       const StyleControlSpec& target,
                                       const StyleControlSpec& style_1,
                                       const StyleControlSpec& style_2,
                                       ComparisonLabel label, judge::ChatClient& llm,
                                       pipeline::CallCache* cache = nullptr);

}  // namespace speechjudge::pairs
