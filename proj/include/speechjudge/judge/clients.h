#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "speechjudge/core/style.h"

namespace speechjudge::pipeline {
class CallCache;
}

namespace speechjudge::judge {

/// Where a model service lives and how hard to try reaching it.
struct ServiceEndpoint {
  std::string url;
  /// Name of the environment variable holding the bearer token, if any.
  std::string auth_env;
  std::string model;
  std::chrono::milliseconds timeout{60'000};
  int retry_budget = 3;
  std::chrono::milliseconds backoff_base{200};
  /// Maximum concurrent in-flight requests to this service.
  int max_in_flight = 4;
};

struct SamplingParams {
  double temperature = 0.95;
  double top_p = 0.7;
  int top_k = 50;
  double repetition_penalty = 1.0;
  std::optional<std::uint64_t> seed;

  bool operator==(const SamplingParams&) const = default;
};

struct ChatMessage {
  std::string role;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  SamplingParams sampling;
};

/// A prefix window of an audio asset. Truncation never moves `start_s`.
struct AudioClip {
  std::string audio_ref;
  double start_s = 0.0;
  double duration_s = 0.0;
  double source_duration_s = 0.0;

  bool truncated() const { return duration_s < source_duration_s; }
};

struct SynthesisRequest {
  std::string text;
  std::optional<StyleControlSpec> style;
  std::string tts_model_id;
  /// Dataset-relative path the audio should be stored under.
  std::string output_ref;
};

struct SynthesisResult {
  std::string audio_ref;
  double duration_s = 0.0;
  std::string tts_model_id;
};

struct SpeechJudgeRequest {
  std::string prompt;
  AudioClip first;
  AudioClip second;
  SamplingParams sampling;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

class Transcriber {
 public:
  virtual ~Transcriber() = default;
  virtual std::string transcribe(const AudioClip& clip) = 0;
};

class Synthesizer {
 public:
  virtual ~Synthesizer() = default;
  virtual SynthesisResult synthesize(const SynthesisRequest& request) = 0;
};

class SpeechJudgeClient {
 public:
  virtual ~SpeechJudgeClient() = default;
  virtual std::string judge(const SpeechJudgeRequest& request) = 0;
};

struct ModelClients {
  std::shared_ptr<Transcriber> transcriber;
  std::shared_ptr<Synthesizer> synthesizer;
  std::shared_ptr<ChatClient> chatter;
  std::shared_ptr<SpeechJudgeClient> speech_judge;
};

/// Convenience: a single user-turn chat request.
ChatRequest user_request(std::string content, SamplingParams sampling = {});

/// Temperature 0, no nucleus cut: for classification and rewriting calls.
SamplingParams greedy_sampling();

nlohmann::json to_json(const SamplingParams& sampling);
nlohmann::json to_json(const ChatRequest& request);

/// `client.complete(request)` memoized under `kind` when a cache is given.
std::string complete_cached(ChatClient& client, const ChatRequest& request,
                            std::string_view kind, pipeline::CallCache* cache);

nlohmann::json to_json(const SynthesisRequest& request);
nlohmann::json to_json(const AudioClip& clip);

/// Memoized synthesis. A cached result assumes the audio file it names is
/// still in place.
SynthesisResult synthesize_cached(Synthesizer& synth, const SynthesisRequest& request,
                                  pipeline::CallCache* cache);

std::string transcribe_cached(Transcriber& transcriber, const AudioClip& clip,
                              pipeline::CallCache* cache);

}  // namespace speechjudge::judge
