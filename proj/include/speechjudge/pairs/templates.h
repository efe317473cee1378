#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "speechjudge/core/record.h"
#include "speechjudge/core/rng.h"
#include "speechjudge/core/style.h"

namespace speechjudge::pairs {

/// Style-control instruction templates, one per line, keyed by what they
/// control and whether they introduce a text to read (TTS) or a question to
/// answer (dialogue). Placeholders: <emotion>, <character>. Gender is carried
/// by the template wording itself.
class TemplateBank {
 public:
  /// The banks compiled into the library.
  static TemplateBank embedded();

  /// Reads `<tts|conversation>_<emotion|gender|voice|mixed>.txt` from `dir`.
  /// Missing files leave that bank empty.
  static TemplateBank from_directory(const std::filesystem::path& dir);

  void add(StyleCategory category, bool mixed, TaskFormat format, std::string tmpl);

  /// Templates usable for `target`: gendered banks are narrowed to the
  /// templates whose wording names the target gender.
  std::vector<std::string> candidates(const StyleControlSpec& target,
                                      TaskFormat format) const;

  std::size_t size() const;

 private:
  using Key = std::tuple<StyleCategory, bool, bool>;  // category, mixed, tts
  static Key key(StyleCategory category, bool mixed, TaskFormat format);

  std::map<Key, std::vector<std::string>> banks_;
};

/// "male", "female" or nullopt, from gendered words in the template.
std::optional<std::string> template_gender(std::string_view tmpl);

/// Picks a template uniformly and fills its placeholders from `target`.
/// Throws TemplateError when no template applies or a placeholder remains.
std::string render_style_instruction(const StyleControlSpec& target, TaskFormat format,
                                     const TemplateBank& bank, Rng& rng);

}  // namespace speechjudge::pairs
