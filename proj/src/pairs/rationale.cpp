#include "speechjudge/pairs/rationale.h"

#include <fmt/format.h>

#include "speechjudge/core/assets.h"
#include "speechjudge/core/errors.h"
#include "speechjudge/core/text.h"

namespace speechjudge::pairs {
namespace {

std::string ask(judge::ChatClient& llm, std::string prompt, std::string_view kind,
                pipeline::CallCache* cache) {
  auto reply = trim(judge::complete_cached(
      llm, judge::user_request(std::move(prompt), judge::greedy_sampling()), kind, cache));
  if (reply.empty()) throw Error(fmt::format("empty {} reply", kind));
  return reply;
}

}  // namespace

std::string verdict_phrase(ComparisonLabel label) {
  switch (label) {
    case ComparisonLabel::kWin: return "Response 1 is better";
    case ComparisonLabel::kLose: return "Response 2 is better";
    case ComparisonLabel::kTie: return "Both responses are of comparable quality";
  }
  return "";
}

std::string rewrite_rationale_comparative(std::string_view instruction,
                                          std::string_view text_1, std::string_view text_2,
                                          ComparisonLabel label, Aspect aspect,
                                          judge::ChatClient& llm, pipeline::CallCache* cache,
                                          std::string_view rationale_1,
                                          std::string_view rationale_2) {
  auto prompt = fill_slots(require_asset("prompts/comparative_rationale.txt"),
                           {{"aspect", aspect_prompt_name(aspect)},
                            {"instruction", std::string(instruction)},
                            {"response_1", std::string(text_1)},
                            {"response_2", std::string(text_2)},
                            {"verdict", verdict_phrase(label)},
                            {"rationale_1", rationale_1.empty() ? "(none)" : std::string(rationale_1)},
                            {"rationale_2", rationale_2.empty() ? "(none)" : std::string(rationale_2)}});
  return ask(llm, std::move(prompt), "comparative_rationale", cache);
}

std::string request_acoustic_rationale(std::string_view instruction,
                                       std::string_view text_1, std::string_view text_2,
                                       const StyleControlSpec& style_1,
                                       const StyleControlSpec& style_2,
                                       ComparisonLabel label, judge::ChatClient& llm,
                                       pipeline::CallCache* cache) {
  auto prompt = fill_slots(require_asset("prompts/acoustic_rationale.txt"),
                           {{"instruction", std::string(instruction)},
                            {"style_1", describe_style(style_1)},
                            {"style_2", describe_style(style_2)},
                            {"response_1", std::string(text_1)},
                            {"response_2", std::string(text_2)},
                            {"verdict", verdict_phrase(label)}});
  return ask(llm, std::move(prompt), "acoustic_rationale", cache);
}

std::string request_implicit_rationale(std::string_view query,
                                       const StyleControlSpec& target,
                                       const StyleControlSpec& style_1,
                                       const StyleControlSpec& style_2,
                                       ComparisonLabel label, judge::ChatClient& llm,
                                       pipeline::CallCache* cache) {
  auto intent = ask(llm,
                    fill_slots(require_asset("prompts/implicit_intent.txt"),
                               {{"instruction", std::string(query)}}),
                    "implicit_intent", cache);
  auto tone = [&](int n, const StyleControlSpec& s) {
    return fmt::format("Response {} uses {}, which {} the intent.", n, describe_style(s),
                       s == target ? "fits" : "does not fit");
  };
  return fmt::format("{} The query calls for {}. {} {} {}.", intent, describe_style(target),
                     tone(1, style_1), tone(2, style_2), verdict_phrase(label));
}

}  // namespace speechjudge::pairs
