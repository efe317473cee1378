#include "speechjudge/filter/classifier.h"

#include <regex>

#include "speechjudge/core/assets.h"
#include "speechjudge/core/errors.h"
#include "speechjudge/core/text.h"
#include "speechjudge/pipeline/cache.h"

namespace speechjudge::filter {

std::string_view math_code_prompt_template() {
  return require_asset("prompts/math_code_filter.txt");
}

std::string render_math_code_prompt(std::string_view instruction,
                                    std::string_view response) {
  return fill_slots(math_code_prompt_template(),
                    {{"instruct", std::string(instruction)},
                     {"response", std::string(response)}});
}

std::optional<bool> parse_boxed_yes_no(std::string_view completion) {
  static const std::regex kBoxed(R"(\\boxed\s*\{\s*(yes|no)\s*\})",
                                 std::regex::icase);
  std::optional<bool> answer;
  const std::string text(completion);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kBoxed);
       it != std::sregex_iterator(); ++it) {
    answer = to_lower((*it)[1].str()) == "yes";
  }
  return answer;
}

bool is_math_or_code(std::string_view instruction, std::string_view response,
                     judge::ChatClient& classifier, pipeline::CallCache* cache) {
  const auto prompt = render_math_code_prompt(instruction, response);
  auto ask = [&] {
    return classifier.complete(judge::user_request(prompt, judge::greedy_sampling()));
  };
  const std::string completion =
      cache ? cache->get_or_compute(pipeline::cache_key("math_code", prompt), ask)
            : ask();
  auto answer = parse_boxed_yes_no(completion);
  if (!answer) {
    throw ClassificationError("math/code classifier reply has no boxed Yes/No: " +
                              completion.substr(0, 200));
  }
  return *answer;
}

}  // namespace speechjudge::filter
