#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace speechjudge {

/// Text assets compiled into the library from assets/, keyed by their path
/// relative to that directory (e.g. "prompts/judge.txt").
std::optional<std::string_view> embedded_asset(std::string_view name);

/// Like embedded_asset but throws ConfigError when the asset is missing.
std::string_view require_asset(std::string_view name);

std::vector<std::string_view> embedded_asset_names();

}  // namespace speechjudge
