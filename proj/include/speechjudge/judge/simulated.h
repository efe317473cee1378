#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <tuple>

#include "speechjudge/core/record.h"
#include "speechjudge/filter/language.h"
#include "speechjudge/judge/clients.h"
#include "speechjudge/judge/prompt.h"

// Offline stand-ins for the model services. They make the pipeline runnable
// without network access and give tests deterministic, inspectable behavior.

namespace speechjudge::judge {

/// Writes a small JSON "audio" file holding the text and style, with a
/// duration proportional to the word count.
class SimulatedSynthesizer : public Synthesizer {
 public:
  explicit SimulatedSynthesizer(std::filesystem::path root, double seconds_per_word = 0.4);
  SynthesisResult synthesize(const SynthesisRequest& request) override;

 private:
  std::filesystem::path root_;
  double seconds_per_word_;
};

/// Reads back a SimulatedSynthesizer file. A clip shorter than its source
/// yields the matching prefix of the words.
class SimulatedTranscriber : public Transcriber {
 public:
  explicit SimulatedTranscriber(std::filesystem::path root);
  std::string transcribe(const AudioClip& clip) override;

 private:
  std::filesystem::path root_;
};

/// Answers the pipeline's own prompts: math/code screening by keyword
/// heuristics, rationale and intent requests with templated text. Anything
/// else gets an unhelpful reply.
class SimulatedChat : public ChatClient {
 public:
  std::string complete(const ChatRequest& request) override;
};

/// Guesses en/fr/es/de from common function words; "en" when unsure.
class SimulatedLanguageDetector : public filter::LanguageDetector {
 public:
  std::string detect(std::string_view text) override;
};

/// Judge that knows every record's ground truth and reports it in whichever
/// order the pair is presented. Unknown requests get an unparseable reply.
class OracleSpeechJudge : public SpeechJudgeClient {
 public:
  OracleSpeechJudge(std::span<const PreferenceRecord> records,
                    PromptMode mode = PromptMode::kTrained);
  std::string judge(const SpeechJudgeRequest& request) override;

 private:
  std::map<std::tuple<std::string, std::string, std::string>, std::string> answers_;
};

/// Text-judge counterpart of OracleSpeechJudge for the cascaded path. It only
/// sees transcripts, so pairs whose transcripts coincide collapse to one entry;
/// such a collision answers Tie.
class OracleTextJudge : public ChatClient {
 public:
  OracleTextJudge(std::span<const PreferenceRecord> records,
                  PromptMode mode = PromptMode::kTrained);
  std::string complete(const ChatRequest& request) override;

 private:
  std::map<std::string, std::string> answers_;
};

/// Always returns the same completion.
class ConstantSpeechJudge : public SpeechJudgeClient {
 public:
  explicit ConstantSpeechJudge(std::string completion) : completion_(std::move(completion)) {}
  std::string judge(const SpeechJudgeRequest&) override { return completion_; }

 private:
  std::string completion_;
};

// Adapters that turn a callable into a client, mainly for tests.

class FunctionChat : public ChatClient {
 public:
  explicit FunctionChat(std::function<std::string(const ChatRequest&)> fn) : fn_(std::move(fn)) {}
  std::string complete(const ChatRequest& r) override { return fn_(r); }

 private:
  std::function<std::string(const ChatRequest&)> fn_;
};

class FunctionTranscriber : public Transcriber {
 public:
  explicit FunctionTranscriber(std::function<std::string(const AudioClip&)> fn)
      : fn_(std::move(fn)) {}
  std::string transcribe(const AudioClip& c) override { return fn_(c); }

 private:
  std::function<std::string(const AudioClip&)> fn_;
};

class FunctionSynthesizer : public Synthesizer {
 public:
  explicit FunctionSynthesizer(std::function<SynthesisResult(const SynthesisRequest&)> fn)
      : fn_(std::move(fn)) {}
  SynthesisResult synthesize(const SynthesisRequest& r) override { return fn_(r); }

 private:
  std::function<SynthesisResult(const SynthesisRequest&)> fn_;
};

class FunctionSpeechJudge : public SpeechJudgeClient {
 public:
  explicit FunctionSpeechJudge(std::function<std::string(const SpeechJudgeRequest&)> fn)
      : fn_(std::move(fn)) {}
  std::string judge(const SpeechJudgeRequest& r) override { return fn_(r); }

 private:
  std::function<std::string(const SpeechJudgeRequest&)> fn_;
};

class FunctionLanguageDetector : public filter::LanguageDetector {
 public:
  explicit FunctionLanguageDetector(std::function<std::string(std::string_view)> fn)
      : fn_(std::move(fn)) {}
  std::string detect(std::string_view text) override { return fn_(text); }

 private:
  std::function<std::string(std::string_view)> fn_;
};

}  // namespace speechjudge::judge
