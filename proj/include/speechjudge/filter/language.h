#pragma once

#include <string>
#include <string_view>

namespace speechjudge::pipeline {
class CallCache;
}

namespace speechjudge::filter {

/// Pluggable language identification. Returns a language code such as "en";
/// throws on failure.
class LanguageDetector {
 public:
  virtual ~LanguageDetector() = default;
  virtual std::string detect(std::string_view text) = 0;
};

enum class ScreenDecision { kKeep, kDrop };

/// Drops text whose detected language differs from `target_language`. The
/// detector's answer is authoritative. Detector failures surface as
/// ScreeningError.
ScreenDecision screen_language(std::string_view text, LanguageDetector& detector,
                               std::string_view target_language = "en",
                               pipeline::CallCache* cache = nullptr);

}  // namespace speechjudge::filter
