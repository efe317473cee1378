#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace speechjudge {

std::string trim(std::string_view text);
std::string to_lower(std::string_view text);
std::vector<std::string> split_lines(std::string_view text);

/// Replaces every `{name}` in `tmpl` whose name is a key of `slots`. The
/// template is scanned once, so slot values are never re-expanded.
std::string fill_slots(std::string_view tmpl,
                       const std::map<std::string, std::string>& slots);

/// Replaces every occurrence of `from` with `to`.
std::string replace_all(std::string_view text, std::string_view from,
                        std::string_view to);

}  // namespace speechjudge
