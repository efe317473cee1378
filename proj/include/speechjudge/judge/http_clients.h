#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "speechjudge/filter/language.h"
#include "speechjudge/judge/clients.h"

namespace speechjudge::judge {

std::string base64_encode(std::string_view bytes);
/// Throws IoError on malformed input.
std::string base64_decode(std::string_view text);

/// Appends one JSON line per service exchange. Base64 audio is elided.
class AuditLog {
 public:
  explicit AuditLog(std::filesystem::path path);
  void record(std::string_view service, std::string_view url, const nlohmann::json& request,
              const nlohmann::json& outcome);

 private:
  std::filesystem::path path_;
  std::mutex mu_;
};

struct SplitUrl {
  /// scheme://host[:port]
  std::string origin;
  std::string path;
};

/// Throws ConfigError unless `url` is http(s)://host[:port][/path].
SplitUrl split_url(std::string_view url);

/// Reads PREFIX_URL, PREFIX_MODEL, PREFIX_AUTH_ENV, PREFIX_TIMEOUT_MS,
/// PREFIX_RETRIES and PREFIX_MAX_IN_FLIGHT. The URL is required.
ServiceEndpoint endpoint_from_env(std::string_view prefix);

/// One JSON POST. Network failures, 5xx and 429 raise TransportError (worth
/// retrying); other non-2xx statuses raise Error.
nlohmann::json post_json(const ServiceEndpoint& endpoint, const nlohmann::json& body,
                         std::string_view service, AuditLog* audit);

/// Chat-completion wire format: {model, messages, sampling fields} in,
/// choices[0].message.content out.
class HttpChatClient : public ChatClient {
 public:
  HttpChatClient(ServiceEndpoint endpoint, std::shared_ptr<AuditLog> audit = nullptr);
  std::string complete(const ChatRequest& request) override;

 private:
  ServiceEndpoint endpoint_;
  std::shared_ptr<AuditLog> audit_;
};

/// {model, audio: {data, format, start_s, duration_s}} in, {text} out.
class HttpTranscriber : public Transcriber {
 public:
  HttpTranscriber(ServiceEndpoint endpoint, std::filesystem::path audio_root,
                  std::shared_ptr<AuditLog> audit = nullptr);
  std::string transcribe(const AudioClip& clip) override;

 private:
  ServiceEndpoint endpoint_;
  std::filesystem::path audio_root_;
  std::shared_ptr<AuditLog> audit_;
};

/// {model, text, style} in, {audio: base64, duration_s} out; the audio is
/// written under the dataset root at the requested output_ref.
class HttpSynthesizer : public Synthesizer {
 public:
  HttpSynthesizer(ServiceEndpoint endpoint, std::filesystem::path audio_root,
                  std::shared_ptr<AuditLog> audit = nullptr);
  SynthesisResult synthesize(const SynthesisRequest& request) override;

 private:
  ServiceEndpoint endpoint_;
  std::filesystem::path audio_root_;
  std::shared_ptr<AuditLog> audit_;
};

/// Chat-completion request with an extra ordered `audios` array of
/// {data, format, start_s, duration_s}.
class HttpSpeechJudge : public SpeechJudgeClient {
 public:
  HttpSpeechJudge(ServiceEndpoint endpoint, std::filesystem::path audio_root,
                  std::shared_ptr<AuditLog> audit = nullptr);
  std::string judge(const SpeechJudgeRequest& request) override;

 private:
  ServiceEndpoint endpoint_;
  std::filesystem::path audio_root_;
  std::shared_ptr<AuditLog> audit_;
};

/// {text} in, {language} out.
class HttpLanguageDetector : public filter::LanguageDetector {
 public:
  HttpLanguageDetector(ServiceEndpoint endpoint, std::shared_ptr<AuditLog> audit = nullptr);
  std::string detect(std::string_view text) override;

 private:
  ServiceEndpoint endpoint_;
  std::shared_ptr<AuditLog> audit_;
};

/// Clients for every service whose SPEECHJUDGE_<SERVICE>_URL is set
/// (TRANSCRIBE, SYNTH, CHAT, JUDGE); the others stay null.
ModelClients http_clients_from_env(const std::filesystem::path& audio_root,
                                   std::shared_ptr<AuditLog> audit = nullptr);

}  // namespace speechjudge::judge
