#pragma once

#include <string_view>

#include "speechjudge/core/record.h"

namespace speechjudge::judge {

/// Reads the judge's answer from a completion.
///
/// The last <Answer>...</Answer> block wins (tag and token are matched
/// case-insensitively, "[1]" style brackets are tolerated); without one, a
/// trailing bare "1", "2" or "Tie" is accepted. "1" maps to win, "2" to lose.
/// When `order_swapped` is set the responses were presented in reverse, so the
/// label is inverted back into the canonical frame. Text other than the answer
/// becomes the rationale. Unreadable completions yield an invalid verdict.
///
/// The returned verdict's aspect and run_seed are left for the caller to set.
Verdict parse_verdict(std::string_view raw, bool order_swapped);

}  // namespace speechjudge::judge
