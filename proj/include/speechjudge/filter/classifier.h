#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "speechjudge/judge/clients.h"

namespace speechjudge::pipeline {
class CallCache;
}

namespace speechjudge::filter {

/// The few-shot math/code screening prompt with {instruct} and {response}
/// slots, as shipped in assets/prompts/math_code_filter.txt.
std::string_view math_code_prompt_template();

std::string render_math_code_prompt(std::string_view instruction,
                                    std::string_view response);

/// Reads the last \boxed{Yes} or \boxed{No} in a completion.
std::optional<bool> parse_boxed_yes_no(std::string_view completion);

/// Asks `classifier` whether the exchange is a math or coding task.
/// Throws ClassificationError when the reply has no boxed Yes/No; the caller
/// is expected to quarantine the item rather than keep it.
bool is_math_or_code(std::string_view instruction, std::string_view response,
                     judge::ChatClient& classifier,
                     pipeline::CallCache* cache = nullptr);

}  // namespace speechjudge::filter
