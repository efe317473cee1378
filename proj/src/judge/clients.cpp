#include "speechjudge/judge/clients.h"

#include "speechjudge/core/record_io.h"
#include "speechjudge/pipeline/cache.h"

namespace speechjudge::judge {

ChatRequest user_request(std::string content, SamplingParams sampling) {
  ChatRequest request;
  request.messages.push_back({"user", std::move(content)});
  request.sampling = sampling;
  return request;
}

SamplingParams greedy_sampling() {
  SamplingParams s;
  s.temperature = 0.0;
  s.top_p = 1.0;
  return s;
}

nlohmann::json to_json(const SamplingParams& s) {
  nlohmann::json j{{"temperature", s.temperature},
                   {"top_p", s.top_p},
                   {"top_k", s.top_k},
                   {"repetition_penalty", s.repetition_penalty}};
  if (s.seed) j["seed"] = *s.seed;
  return j;
}

nlohmann::json to_json(const ChatRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  return {{"messages", std::move(messages)}, {"sampling", to_json(request.sampling)}};
}

std::string complete_cached(ChatClient& client, const ChatRequest& request,
                            std::string_view kind, pipeline::CallCache* cache) {
  auto call = [&] { return client.complete(request); };
  if (!cache) return call();
  return cache->get_or_compute(pipeline::cache_key(kind, to_json(request)), call);
}

nlohmann::json to_json(const SynthesisRequest& request) {
  nlohmann::json j{{"text", request.text},
                   {"tts_model_id", request.tts_model_id},
                   {"output_ref", request.output_ref}};
  j["style"] = request.style ? speechjudge::to_json(*request.style) : nlohmann::json();
  return j;
}

nlohmann::json to_json(const AudioClip& clip) {
  return {{"audio_ref", clip.audio_ref},
          {"start_s", clip.start_s},
          {"duration_s", clip.duration_s},
          {"source_duration_s", clip.source_duration_s}};
}

SynthesisResult synthesize_cached(Synthesizer& synth, const SynthesisRequest& request,
                                  pipeline::CallCache* cache) {
  auto call = [&] {
    const auto r = synth.synthesize(request);
    return nlohmann::json{{"audio_ref", r.audio_ref},
                          {"duration_s", r.duration_s},
                          {"tts_model_id", r.tts_model_id}}
        .dump();
  };
  const auto j = nlohmann::json::parse(
      cache ? cache->get_or_compute(pipeline::cache_key("synthesis", to_json(request)), call)
            : call());
  return SynthesisResult{j.at("audio_ref").get<std::string>(),
                         j.at("duration_s").get<double>(),
                         j.at("tts_model_id").get<std::string>()};
}

std::string transcribe_cached(Transcriber& transcriber, const AudioClip& clip,
                              pipeline::CallCache* cache) {
  auto call = [&] { return transcriber.transcribe(clip); };
  if (!cache) return call();
  return cache->get_or_compute(pipeline::cache_key("transcript", to_json(clip)), call);
}

}  // namespace speechjudge::judge
