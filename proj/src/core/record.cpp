#include "speechjudge/core/record.h"

#include "speechjudge/core/errors.h"

namespace speechjudge {

std::string_view to_string(TaskFormat format) {
  switch (format) {
    case TaskFormat::kSemantic:
      return "semantic";
    case TaskFormat::kExplicitTts:
      return "explicit_tts";
    case TaskFormat::kExplicitDialogue:
      return "explicit_dialogue";
    case TaskFormat::kImplicitDialogue:
      return "implicit_dialogue";
  }
  return "?";
}

TaskFormat parse_task_format(std::string_view text) {
  if (text == "semantic") return TaskFormat::kSemantic;
  if (text == "explicit_tts") return TaskFormat::kExplicitTts;
  if (text == "explicit_dialogue") return TaskFormat::kExplicitDialogue;
  if (text == "implicit_dialogue") return TaskFormat::kImplicitDialogue;
  throw ConfigError("unknown task format: " + std::string(text));
}

}  // namespace speechjudge
