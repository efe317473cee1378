#pragma once

#include <string>
#include <string_view>

namespace speechjudge::filter {

struct SanitizeOptions {
  /// Characters removed outright; they have no spoken form.
  std::string forbidden = "*#`|~^_\\<>{}";
};

/// Prepares text for synthesis. Line breaks (real or written as escape
/// sequences such as a literal backslash-n) become sentence boundaries, tabs
/// and other control characters become spaces, forbidden characters are
/// dropped and whitespace runs collapse to one space.
std::string sanitize_text(std::string_view raw, const SanitizeOptions& options = {});

}  // namespace speechjudge::filter
