#include "speechjudge/judge/prompt.h"

#include <vector>

#include "speechjudge/core/assets.h"
#include "speechjudge/core/errors.h"
#include "speechjudge/core/text.h"

namespace speechjudge::judge {

std::string JudgePrompt::with_transcripts(std::string_view first,
                                          std::string_view second) const {
  std::string out = text;
  out.replace(audio_slots[1], kAudioPlaceholder.size(), second);
  out.replace(audio_slots[0], kAudioPlaceholder.size(), first);
  return out;
}

JudgePrompt render_judge_prompt(Aspect aspect, std::string_view instruction,
                                PromptMode mode) {
  const std::string_view tmpl = require_asset(
      mode == PromptMode::kTrained ? "prompts/judge.txt" : "prompts/baseline_judge.txt");

  // Split on the placeholders before filling so that an instruction which
  // happens to contain "<audio>" cannot shift the slots.
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  for (auto hit = tmpl.find(kAudioPlaceholder); hit != std::string_view::npos;
       hit = tmpl.find(kAudioPlaceholder, pos)) {
    parts.push_back(tmpl.substr(pos, hit - pos));
    pos = hit + kAudioPlaceholder.size();
  }
  parts.push_back(tmpl.substr(pos));
  if (parts.size() != 3) {
    throw ConfigError("judge template must contain exactly two audio placeholders");
  }

  const std::string name = aspect_prompt_name(aspect);
  const std::map<std::string, std::string> slots{
      {"Aspect", name}, {"Task", name}, {"Instruction", std::string(instruction)}};

  JudgePrompt prompt;
  prompt.text = fill_slots(parts[0], slots);
  prompt.audio_slots[0] = prompt.text.size();
  prompt.text += kAudioPlaceholder;
  prompt.text += fill_slots(parts[1], slots);
  prompt.audio_slots[1] = prompt.text.size();
  prompt.text += kAudioPlaceholder;
  prompt.text += fill_slots(parts[2], slots);
  return prompt;
}

}  // namespace speechjudge::judge
