#include "speechjudge/filter/language.h"

#include "speechjudge/core/errors.h"
#include "speechjudge/core/text.h"
#include "speechjudge/pipeline/cache.h"

namespace speechjudge::filter {

ScreenDecision screen_language(std::string_view text, LanguageDetector& detector,
                               std::string_view target_language,
                               pipeline::CallCache* cache) {
  std::string detected;
  try {
    auto detect = [&] { return detector.detect(text); };
    detected = cache ? cache->get_or_compute(
                           pipeline::cache_key("language", text), detect)
                     : detect();
  } catch (const ScreeningError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScreeningError(std::string("language detection failed: ") + e.what());
  }
  return to_lower(trim(detected)) == to_lower(target_language)
             ? ScreenDecision::kKeep
             : ScreenDecision::kDrop;
}

}  // namespace speechjudge::filter
