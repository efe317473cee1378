#include "speechjudge/filter/sanitize.h"

#include <cctype>

#include "speechjudge/core/text.h"

namespace speechjudge::filter {
namespace {

bool ends_sentence(char c) {
  return c == '.' || c == '!' || c == '?' || c == ';' || c == ':' || c == ',';
}

}  // namespace

std::string sanitize_text(std::string_view raw, const SanitizeOptions& options) {
  std::string out;
  out.reserve(raw.size());

  auto last_visible = [&out]() -> char {
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      if (*it != ' ') return *it;
    }
    return '\0';
  };
  auto emit_break = [&]() {
    const char prev = last_visible();
    if (prev == '\0') return;
    if (!ends_sentence(prev)) {
      while (!out.empty() && out.back() == ' ') out.pop_back();
      out += '.';
    }
    out += ' ';
  };

  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c == '\\' && i + 1 < raw.size()) {
      const char next = raw[i + 1];
      if (next == 'n' || next == 'r') {
        // "\r\n" written out counts as one break.
        if (next == 'r' && raw.substr(i + 2, 2) == "\\n") i += 2;
        emit_break();
        ++i;
        continue;
      }
      if (next == 't') {
        out += ' ';
        ++i;
        continue;
      }
    }
    if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
      emit_break();
      continue;
    }
    const auto uc = static_cast<unsigned char>(c);
    if (std::iscntrl(uc) || c == '\t') {
      out += ' ';
      continue;
    }
    if (options.forbidden.find(c) != std::string::npos) continue;
    out += c;
  }

  std::string collapsed;
  collapsed.reserve(out.size());
  for (char c : out) {
    if (c == ' ' && (collapsed.empty() || collapsed.back() == ' ')) continue;
    collapsed += c;
  }
  return trim(collapsed);
}

}  // namespace speechjudge::filter
