#include "speechjudge/judge/http_clients.h"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <regex>

#include <fmt/format.h>
#include <httplib.h>
#include <openssl/evp.h>

#include "speechjudge/core/errors.h"
#include "speechjudge/core/record_io.h"

namespace speechjudge::judge {

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw IoError("base64 length is not a multiple of 4");
  std::string out(3 * text.size() / 4, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw IoError("malformed base64");
  // EVP_DecodeBlock keeps the bytes that padding stands for.
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

namespace {

nlohmann::json elide_audio(nlohmann::json j) {
  if (j.is_object()) {
    for (auto& [k, v] : j.items()) {
      if ((k == "data" || k == "audio") && v.is_string()) {
        v = fmt::format("<{} base64 chars>", v.get_ref<const std::string&>().size());
      } else {
        v = elide_audio(v);
      }
    }
  } else if (j.is_array()) {
    for (auto& v : j) v = elide_audio(v);
  }
  return j;
}

std::string epoch_ms() {
  const auto now = std::chrono::system_clock::now();
  return fmt::format("{}", std::chrono::duration_cast<std::chrono::milliseconds>(
                               now.time_since_epoch())
                               .count());
}

nlohmann::json audio_payload(const std::filesystem::path& root, const AudioClip& clip) {
  std::string format = std::filesystem::path(clip.audio_ref).extension().string();
  if (!format.empty()) format.erase(0, 1);
  return {{"data", base64_encode(read_file(root / clip.audio_ref))},
          {"format", format},
          {"start_s", clip.start_s},
          {"duration_s", clip.duration_s}};
}

std::string completion_text(const nlohmann::json& reply) {
  if (reply.contains("choices")) {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  }
  return reply.at("text").get<std::string>();
}

void add_sampling(nlohmann::json& body, const SamplingParams& s) {
  body.update(to_json(s));
}

}  // namespace

AuditLog::AuditLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
}

void AuditLog::record(std::string_view service, std::string_view url,
                      const nlohmann::json& request, const nlohmann::json& outcome) {
  const nlohmann::json line{{"time_ms", epoch_ms()},
                            {"service", service},
                            {"url", url},
                            {"request", elide_audio(request)},
                            {"outcome", elide_audio(outcome)}};
  std::lock_guard lock(mu_);
  std::ofstream out(path_, std::ios::app);
  out << line.dump() << '\n';
}

SplitUrl split_url(std::string_view url) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::cmatch m;
  if (!std::regex_match(url.begin(), url.end(), m, kUrl)) {
    throw ConfigError(fmt::format("not an http(s) URL: '{}'", url));
  }
  return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

ServiceEndpoint endpoint_from_env(std::string_view prefix) {
  auto env = [&](std::string_view suffix) -> std::optional<std::string> {
    const auto name = fmt::format("{}_{}", prefix, suffix);
    const char* v = std::getenv(name.c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  auto number = [&](std::string_view suffix, long fallback) {
    const auto v = env(suffix);
    if (!v) return fallback;
    try {
      return std::stol(*v);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("{}_{} is not a number: '{}'", prefix, suffix, *v));
    }
  };
  ServiceEndpoint ep;
  const auto url = env("URL");
  if (!url) throw ConfigError(fmt::format("{}_URL is not set", prefix));
  ep.url = *url;
  ep.model = env("MODEL").value_or("");
  ep.auth_env = env("AUTH_ENV").value_or("");
  ep.timeout = std::chrono::milliseconds(number("TIMEOUT_MS", ep.timeout.count()));
  ep.retry_budget = static_cast<int>(number("RETRIES", ep.retry_budget));
  ep.max_in_flight = static_cast<int>(number("MAX_IN_FLIGHT", ep.max_in_flight));
  return ep;
}

nlohmann::json post_json(const ServiceEndpoint& endpoint, const nlohmann::json& body,
                         std::string_view service, AuditLog* audit) {
  const auto target = split_url(endpoint.url);
  httplib::Client client(target.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(endpoint.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!endpoint.auth_env.empty()) {
    if (const char* token = std::getenv(endpoint.auth_env.c_str())) {
      headers.emplace("Authorization", fmt::format("Bearer {}", token));
    }
  }

  auto fail = [&](auto error_type, std::string message) {
    if (audit) audit->record(service, endpoint.url, body, {{"error", message}});
    throw decltype(error_type)(fmt::format("{} {}: {}", service, endpoint.url, message));
  };

  auto res = client.Post(target.path, headers, body.dump(), "application/json");
  if (!res) fail(TransportError(""), httplib::to_string(res.error()));
  if (res->status == 429 || res->status >= 500) {
    fail(TransportError(""), fmt::format("HTTP {}", res->status));
  }
  if (res->status < 200 || res->status >= 300) {
    fail(Error(""), fmt::format("HTTP {}: {}", res->status, res->body.substr(0, 200)));
  }
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    fail(TransportError(""), fmt::format("unparseable reply: {}", e.what()));
  }
  if (audit) audit->record(service, endpoint.url, body, reply);
  return reply;
}

HttpChatClient::HttpChatClient(ServiceEndpoint endpoint, std::shared_ptr<AuditLog> audit)
    : endpoint_(std::move(endpoint)), audit_(std::move(audit)) {}

std::string HttpChatClient::complete(const ChatRequest& request) {
  nlohmann::json body = to_json(request);
  body.erase("sampling");
  body["model"] = endpoint_.model;
  add_sampling(body, request.sampling);
  return completion_text(post_json(endpoint_, body, "chat", audit_.get()));
}

HttpTranscriber::HttpTranscriber(ServiceEndpoint endpoint, std::filesystem::path audio_root,
                                 std::shared_ptr<AuditLog> audit)
    : endpoint_(std::move(endpoint)), audio_root_(std::move(audio_root)), audit_(std::move(audit)) {}

std::string HttpTranscriber::transcribe(const AudioClip& clip) {
  const nlohmann::json body{{"model", endpoint_.model}, {"audio", audio_payload(audio_root_, clip)}};
  return post_json(endpoint_, body, "transcription", audit_.get()).at("text").get<std::string>();
}

HttpSynthesizer::HttpSynthesizer(ServiceEndpoint endpoint, std::filesystem::path audio_root,
                                 std::shared_ptr<AuditLog> audit)
    : endpoint_(std::move(endpoint)), audio_root_(std::move(audio_root)), audit_(std::move(audit)) {}

SynthesisResult HttpSynthesizer::synthesize(const SynthesisRequest& request) {
  nlohmann::json body = to_json(request);
  body["model"] = request.tts_model_id.empty() ? endpoint_.model : request.tts_model_id;
  const auto reply = post_json(endpoint_, body, "synthesis", audit_.get());
  write_file_atomic(audio_root_ / request.output_ref,
                    base64_decode(reply.at("audio").get<std::string>()));
  return {request.output_ref, reply.at("duration_s").get<double>(),
          body["model"].get<std::string>()};
}

HttpSpeechJudge::HttpSpeechJudge(ServiceEndpoint endpoint, std::filesystem::path audio_root,
                                 std::shared_ptr<AuditLog> audit)
    : endpoint_(std::move(endpoint)), audio_root_(std::move(audio_root)), audit_(std::move(audit)) {}

std::string HttpSpeechJudge::judge(const SpeechJudgeRequest& request) {
  nlohmann::json body{
      {"model", endpoint_.model},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
      {"audios", nlohmann::json::array({audio_payload(audio_root_, request.first),
                                        audio_payload(audio_root_, request.second)})}};
  add_sampling(body, request.sampling);
  return completion_text(post_json(endpoint_, body, "speech_judge", audit_.get()));
}

HttpLanguageDetector::HttpLanguageDetector(ServiceEndpoint endpoint,
                                           std::shared_ptr<AuditLog> audit)
    : endpoint_(std::move(endpoint)), audit_(std::move(audit)) {}

std::string HttpLanguageDetector::detect(std::string_view text) {
  const nlohmann::json body{{"text", text}};
  return post_json(endpoint_, body, "language", audit_.get()).at("language").get<std::string>();
}

ModelClients http_clients_from_env(const std::filesystem::path& audio_root,
                                   std::shared_ptr<AuditLog> audit) {
  auto configured = [](std::string_view prefix) {
    const char* v = std::getenv(fmt::format("{}_URL", prefix).c_str());
    return v && *v;
  };
  ModelClients clients;
  if (configured("SPEECHJUDGE_TRANSCRIBE")) {
    clients.transcriber = std::make_shared<HttpTranscriber>(
        endpoint_from_env("SPEECHJUDGE_TRANSCRIBE"), audio_root, audit);
  }
  if (configured("SPEECHJUDGE_SYNTH")) {
    clients.synthesizer = std::make_shared<HttpSynthesizer>(
        endpoint_from_env("SPEECHJUDGE_SYNTH"), audio_root, audit);
  }
  if (configured("SPEECHJUDGE_CHAT")) {
    clients.chatter =
        std::make_shared<HttpChatClient>(endpoint_from_env("SPEECHJUDGE_CHAT"), audit);
  }
  if (configured("SPEECHJUDGE_JUDGE")) {
    clients.speech_judge = std::make_shared<HttpSpeechJudge>(
        endpoint_from_env("SPEECHJUDGE_JUDGE"), audio_root, audit);
  }
  return clients;
}

}  // namespace speechjudge::judge
