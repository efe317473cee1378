#include "speechjudge/judge/simulated.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <regex>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "speechjudge/core/errors.h"
#include "speechjudge/core/record_io.h"
#include "speechjudge/core/text.h"
#include "speechjudge/filter/wer.h"

namespace speechjudge::judge {
namespace {

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

std::string answer_reply(ComparisonLabel label) {
  return fmt::format("Judged against the reference. <Answer>{}</Answer>", answer_token(label));
}

std::string capture(const std::string& text, const std::regex& re) {
  std::smatch m;
  return std::regex_search(text, m, re) ? m[1].str() : std::string();
}

bool looks_like_math_or_code(std::string_view item) {
  static const std::regex kArithmetic(R"(\d\s*[-+*/^=<>]\s*\d)");
  static const std::regex kKeywords(
      R"(\b(solve|equation|integral|derivative|calculate|compute|theorem|algebra|polynomial|code|coding|program|programming|python|javascript|java|sql|algorithm|function|compile|regex|script)\b)",
      std::regex::icase);
  const std::string text(item);
  return text.find("```") != std::string::npos || text.find("def ") != std::string::npos ||
         text.find("#include") != std::string::npos || std::regex_search(text, kArithmetic) ||
         std::regex_search(text, kKeywords);
}

}  // namespace

SimulatedSynthesizer::SimulatedSynthesizer(std::filesystem::path root, double seconds_per_word)
    : root_(std::move(root)), seconds_per_word_(seconds_per_word) {}

SynthesisResult SimulatedSynthesizer::synthesize(const SynthesisRequest& request) {
  const auto words = split_words(request.text).size();
  const double duration = static_cast<double>(std::max<std::size_t>(words, 1)) * seconds_per_word_;
  nlohmann::json audio{{"text", request.text},
                       {"tts_model_id", request.tts_model_id},
                       {"duration_s", duration}};
  audio["style"] = request.style ? to_json(*request.style) : nlohmann::json();
  write_file_atomic(root_ / request.output_ref, audio.dump() + "\n");
  return {request.output_ref, duration, request.tts_model_id};
}

SimulatedTranscriber::SimulatedTranscriber(std::filesystem::path root) : root_(std::move(root)) {}

std::string SimulatedTranscriber::transcribe(const AudioClip& clip) {
  nlohmann::json audio;
  try {
    audio = nlohmann::json::parse(read_file(root_ / clip.audio_ref));
  } catch (const std::exception& e) {
    throw TransportError(fmt::format("cannot read {}: {}", clip.audio_ref, e.what()));
  }
  const auto text = audio.at("text").get<std::string>();
  if (!clip.truncated() || clip.source_duration_s <= 0.0) return text;
  const auto words = split_words(text);
  const auto keep = static_cast<std::size_t>(
      std::floor(static_cast<double>(words.size()) * clip.duration_s / clip.source_duration_s));
  std::string out;
  for (std::size_t i = 0; i < keep && i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

std::string SimulatedChat::complete(const ChatRequest& request) {
  const std::string prompt = request.messages.empty() ? "" : request.messages.back().content;

  if (prompt.find("\\boxed{") != std::string::npos) {
    const auto at = prompt.rfind("Instruct:");
    auto item = at == std::string::npos ? prompt : prompt.substr(at);
    // The template closes the item with a fence of its own.
    if (const auto fence = item.rfind("```"); fence != std::string::npos) item.resize(fence);
    return looks_like_math_or_code(item) ? "\\boxed{Yes}" : "\\boxed{No}";
  }
  static const std::regex kLabel(R"(### Label:\s*\n([^\n]*))");
  if (prompt.find("Output only the comparative rationale.") != std::string::npos) {
    static const std::regex kAspect(R"re(aspect "([^"]+)")re");
    return fmt::format("Comparing Response 1 and Response 2 on {}: {}.",
                       capture(prompt, kAspect), trim(capture(prompt, kLabel)));
  }
  if (prompt.find("Output only the rationale.") != std::string::npos) {
    static const std::regex kStyle1(R"(### Response 1 \(([^\n]*)\):)");
    static const std::regex kStyle2(R"(### Response 2 \(([^\n]*)\):)");
    return fmt::format(
        "Response 1 is delivered with {} and Response 2 with {}. Against the requested style, {}.",
        capture(prompt, kStyle1), capture(prompt, kStyle2), trim(capture(prompt, kLabel)));
  }
  if (prompt.find("Output only the explanation.") != std::string::npos) {
    return "The query carries feelings the speaker does not name outright, and a spoken reply "
           "should answer that emotional need in its tone.";
  }
  return "I am not able to help with that.";
}

std::string SimulatedLanguageDetector::detect(std::string_view text) {
  static const std::array<std::pair<std::string_view, std::set<std::string>>, 4> kStopwords{{
      {"en", {"the", "and", "is", "are", "you", "of", "to", "what", "how", "with", "this",
              "that", "i", "it", "in", "for", "can", "please", "my", "your"}},
      {"fr", {"le", "la", "les", "et", "est", "vous", "je", "de", "des", "un", "une", "que",
              "pour", "comment", "pas", "dans", "avec", "bonjour", "votre", "mon"}},
      {"es", {"el", "los", "las", "y", "es", "usted", "yo", "que", "por", "como", "una",
              "para", "con", "está", "qué", "hola", "mi", "tu", "cómo"}},
      {"de", {"der", "die", "das", "und", "ist", "sie", "ich", "nicht", "ein", "eine", "mit",
              "wie", "für", "zu", "was", "guten", "mein", "ihr", "bitte"}},
  }};
  std::string lowered = to_lower(text);
  for (char& c : lowered) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 128 && !std::isalpha(u)) c = ' ';
  }
  const auto words = split_words(lowered);
  std::string_view best = "en";
  std::size_t best_hits = 0;
  for (const auto& [lang, stop] : kStopwords) {
    const auto hits = static_cast<std::size_t>(std::count_if(
        words.begin(), words.end(), [&](const std::string& w) { return stop.contains(w); }));
    if (hits > best_hits) {
      best = lang;
      best_hits = hits;
    }
  }
  return std::string(best);
}

OracleSpeechJudge::OracleSpeechJudge(std::span<const PreferenceRecord> records, PromptMode mode) {
  for (const auto& r : records) {
    for (const auto& [aspect, label] : r.labels) {
      const auto prompt = render_judge_prompt(aspect, r.instruction, mode).text;
      answers_[{prompt, r.response_1.audio_ref, r.response_2.audio_ref}] = answer_reply(label);
      answers_[{prompt, r.response_2.audio_ref, r.response_1.audio_ref}] =
          answer_reply(invert_label(label));
    }
  }
}

std::string OracleSpeechJudge::judge(const SpeechJudgeRequest& request) {
  const auto it = answers_.find({request.prompt, request.first.audio_ref, request.second.audio_ref});
  return it == answers_.end() ? "I cannot tell these apart." : it->second;
}

OracleTextJudge::OracleTextJudge(std::span<const PreferenceRecord> records, PromptMode mode) {
  std::set<std::string> collided;
  auto put = [&](const std::string& prompt, ComparisonLabel label) {
    const auto reply = answer_reply(label);
    auto [it, inserted] = answers_.emplace(prompt, reply);
    if (!inserted && it->second != reply) collided.insert(prompt);
  };
  for (const auto& r : records) {
    const auto t1 = r.response_1.transcript.value_or(r.response_1.source_text);
    const auto t2 = r.response_2.transcript.value_or(r.response_2.source_text);
    for (const auto& [aspect, label] : r.labels) {
      const auto prompt = render_judge_prompt(aspect, r.instruction, mode);
      put(prompt.with_transcripts(t1, t2), label);
      put(prompt.with_transcripts(t2, t1), invert_label(label));
    }
  }
  for (const auto& p : collided) answers_[p] = answer_reply(ComparisonLabel::kTie);
}

std::string OracleTextJudge::complete(const ChatRequest& request) {
  const std::string prompt = request.messages.empty() ? "" : request.messages.back().content;
  const auto it = answers_.find(prompt);
  return it == answers_.end() ? "I cannot tell these apart." : it->second;
}

}  // namespace speechjudge::judge
