#include "speechjudge/pairs/templates.h"

#include <regex>

#include <fmt/format.h>

#include "speechjudge/core/assets.h"
#include "speechjudge/core/errors.h"
#include "speechjudge/core/record_io.h"
#include "speechjudge/core/text.h"

namespace speechjudge::pairs {
namespace {

struct BankFile {
  StyleCategory category;
  bool mixed;
  std::string_view name;
};

constexpr BankFile kBankFiles[] = {
    {StyleCategory::kEmotion, false, "emotion"},
    {StyleCategory::kGender, false, "gender"},
    {StyleCategory::kVoice, false, "voice"},
    {StyleCategory::kEmotion, true, "mixed"},
};

void add_lines(TemplateBank& bank, const BankFile& file, TaskFormat format,
               std::string_view content) {
  for (auto& line : split_lines(content)) {
    auto t = trim(line);
    if (!t.empty()) bank.add(file.category, file.mixed, format, std::move(t));
  }
}

}  // namespace

TemplateBank::Key TemplateBank::key(StyleCategory category, bool mixed, TaskFormat format) {
  switch (format) {
    case TaskFormat::kExplicitTts: return {category, mixed, true};
    case TaskFormat::kExplicitDialogue: return {category, mixed, false};
    default:
      throw TemplateError(fmt::format("no style templates for task format {}",
                                      to_string(format)));
  }
}

TemplateBank TemplateBank::embedded() {
  TemplateBank bank;
  for (const auto& file : kBankFiles) {
    for (auto [prefix, format] : {std::pair{"tts", TaskFormat::kExplicitTts},
                                  std::pair{"conversation", TaskFormat::kExplicitDialogue}}) {
      add_lines(bank, file, format,
                require_asset(fmt::format("templates/{}_{}.txt", prefix, file.name)));
    }
  }
  return bank;
}

TemplateBank TemplateBank::from_directory(const std::filesystem::path& dir) {
  TemplateBank bank;
  for (const auto& file : kBankFiles) {
    for (auto [prefix, format] : {std::pair{"tts", TaskFormat::kExplicitTts},
                                  std::pair{"conversation", TaskFormat::kExplicitDialogue}}) {
      const auto path = dir / fmt::format("{}_{}.txt", prefix, file.name);
      if (std::filesystem::exists(path)) add_lines(bank, file, format, read_file(path));
    }
  }
  return bank;
}

void TemplateBank::add(StyleCategory category, bool mixed, TaskFormat format,
                       std::string tmpl) {
  banks_[key(category, mixed, format)].push_back(std::move(tmpl));
}

std::vector<std::string> TemplateBank::candidates(const StyleControlSpec& target,
                                                  TaskFormat format) const {
  std::vector<std::string> out;
  const auto it = banks_.find(key(target.category, target.mixed, format));
  if (it == banks_.end()) return out;

  std::optional<std::string> gender;
  if (target.category == StyleCategory::kGender) gender = target.target_label;
  if (target.mixed) gender = target.gender_label;

  for (const auto& t : it->second) {
    if (!gender || template_gender(t) == gender) out.push_back(t);
  }
  return out;
}

std::size_t TemplateBank::size() const {
  std::size_t n = 0;
  for (const auto& [k, v] : banks_) n += v.size();
  return n;
}

std::optional<std::string> template_gender(std::string_view tmpl) {
  static const std::regex kFemale(R"(\b(female|woman|women|feminine|lady)\b)",
                                  std::regex::icase);
  static const std::regex kMale(R"(\b(male|man|men|masculine|gentleman)\b)",
                                std::regex::icase);
  const std::string text(tmpl);
  if (std::regex_search(text, kFemale)) return "female";
  if (std::regex_search(text, kMale)) return "male";
  return std::nullopt;
}

std::string render_style_instruction(const StyleControlSpec& target, TaskFormat format,
                                     const TemplateBank& bank, Rng& rng) {
  const auto options = bank.candidates(target, format);
  if (options.empty()) {
    throw TemplateError(fmt::format("no {} template for '{}'", to_string(format),
                                    describe_style(target)));
  }
  std::string text = options[uniform_index(rng, options.size())];
  if (target.category == StyleCategory::kEmotion) {
    text = replace_all(text, "<emotion>", target.target_label);
  } else if (target.category == StyleCategory::kVoice) {
    text = replace_all(text, "<character>", target.target_label);
  }

  static const std::regex kPlaceholder(R"(<[A-Za-z_]+>)");
  std::smatch m;
  if (std::regex_search(text, m, kPlaceholder)) {
    throw TemplateError(fmt::format("unresolved placeholder {} in '{}'", m.str(), text));
  }
  return text;
}

}  // namespace speechjudge::pairs
