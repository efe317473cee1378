#include "speechjudge/judge/judge.h"

#include <fmt/format.h>

#include "speechjudge/core/errors.h"
#include "speechjudge/judge/verdict_parser.h"
#include "speechjudge/pipeline/cache.h"

namespace speechjudge::judge {

std::string_view to_string(Backend backend) {
  return backend == Backend::kEndToEnd ? "e2e" : "cascaded";
}

Backend parse_backend(std::string_view text) {
  if (text == "e2e") return Backend::kEndToEnd;
  if (text == "cascaded") return Backend::kCascaded;
  throw ConfigError(fmt::format("unknown backend '{}'", text));
}

void JudgeRunConfig::validate() const {
  if (run_seeds.empty()) throw ConfigError("run_seeds must not be empty");
  if (!(max_pair_audio_s > 0.0)) throw ConfigError("max_pair_audio_s must be positive");
}

TruncationPlan truncate_pair(const SpeechResponse& first, const SpeechResponse& second,
                             double max_total_s) {
  TruncationPlan plan;
  plan.first = {first.audio_ref, 0.0, first.duration_s, first.duration_s};
  plan.second = {second.audio_ref, 0.0, second.duration_s, second.duration_s};
  const double total = first.duration_s + second.duration_s;
  if (total > max_total_s) {
    const double scale = max_total_s / total;
    plan.first.duration_s = first.duration_s * scale;
    plan.second.duration_s = second.duration_s * scale;
    plan.truncated = true;
  }
  return plan;
}

std::string verdict_cache_key(std::string_view record_id, Aspect aspect, Backend backend,
                              bool swapped, std::uint64_t run_seed,
                              std::string_view prompt_text) {
  const nlohmann::json payload{{"record_id", record_id},
                               {"aspect", to_string(aspect)},
                               {"backend", to_string(backend)},
                               {"swapped", swapped},
                               {"run_seed", run_seed},
                               {"prompt", pipeline::cache_key("prompt", prompt_text)}};
  return pipeline::cache_key("verdict", payload);
}

namespace {

SamplingParams seeded(SamplingParams s, std::uint64_t run_seed) {
  s.seed = run_seed;
  return s;
}

std::string cached_call(const JudgeCallOptions& options, const std::string& key,
                        const std::function<std::string()>& call) {
  return options.cache ? options.cache->get_or_compute(key, call) : call();
}

Verdict finish(Verdict v, Aspect aspect, std::uint64_t run_seed, bool truncated) {
  v.aspect = aspect;
  v.run_seed = run_seed;
  v.truncated = truncated;
  return v;
}

}  // namespace

Verdict judge_pair_e2e(const PreferenceRecord& record, Aspect aspect,
                       const ModelClients& clients, const JudgeRunConfig& config,
                       std::uint64_t run_seed, const JudgeCallOptions& options) {
  if (!clients.speech_judge) throw PreconditionError("no speech judge client configured");
  const auto& first = options.swapped ? record.response_2 : record.response_1;
  const auto& second = options.swapped ? record.response_1 : record.response_2;
  const auto plan = truncate_pair(first, second, config.max_pair_audio_s);
  const auto prompt = render_judge_prompt(aspect, record.instruction, config.prompt_mode);

  SpeechJudgeRequest request{prompt.text, plan.first, plan.second,
                             seeded(config.sampling, run_seed)};
  const auto key = verdict_cache_key(record.id, aspect, Backend::kEndToEnd, options.swapped,
                                     run_seed, prompt.text);
  const auto raw =
      cached_call(options, key, [&] { return clients.speech_judge->judge(request); });
  return finish(parse_verdict(raw, options.swapped), aspect, run_seed, plan.truncated);
}

Verdict judge_pair_cascaded(const PreferenceRecord& record, Aspect aspect,
                            const ModelClients& clients, const JudgeRunConfig& config,
                            std::uint64_t run_seed, const JudgeCallOptions& options) {
  if (!clients.chatter) throw PreconditionError("no chat client configured");
  auto transcript = [&](const SpeechResponse& r, std::string_view side) {
    if (r.transcript) return *r.transcript;
    if (!clients.transcriber) throw PreconditionError("no transcriber configured");
    try {
      return transcribe_cached(*clients.transcriber,
                               {r.audio_ref, 0.0, r.duration_s, r.duration_s}, options.cache);
    } catch (const std::exception& e) {
      throw TransportError(fmt::format("transcription of {} failed: {}", side, e.what()));
    }
  };
  const auto t1 = transcript(record.response_1, "response_1");
  const auto t2 = transcript(record.response_2, "response_2");

  const auto prompt = render_judge_prompt(aspect, record.instruction, config.prompt_mode);
  const auto text = options.swapped ? prompt.with_transcripts(t2, t1)
                                    : prompt.with_transcripts(t1, t2);
  const auto key = verdict_cache_key(record.id, aspect, Backend::kCascaded, options.swapped,
                                     run_seed, text);
  const auto raw = cached_call(options, key, [&] {
    return clients.chatter->complete(user_request(text, seeded(config.sampling, run_seed)));
  });
  return finish(parse_verdict(raw, options.swapped), aspect, run_seed, false);
}

Verdict judge_pair(const PreferenceRecord& record, Aspect aspect, Backend backend,
                   const ModelClients& clients, const JudgeRunConfig& config,
                   std::uint64_t run_seed, const JudgeCallOptions& options) {
  return backend == Backend::kEndToEnd
             ? judge_pair_e2e(record, aspect, clients, config, run_seed, options)
             : judge_pair_cascaded(record, aspect, clients, config, run_seed, options);
}

OrderPair judge_both_orders(const PreferenceRecord& record, Aspect aspect, Backend backend,
                            const ModelClients& clients, const JudgeRunConfig& config,
                            std::uint64_t run_seed, pipeline::CallCache* cache) {
  OrderPair pair;
  pair.forward = judge_pair(record, aspect, backend, clients, config, run_seed, {false, cache});
  pair.reverse = judge_pair(record, aspect, backend, clients, config, run_seed, {true, cache});
  pair.consistent =
      pair.forward.valid() && pair.reverse.valid() && pair.forward.label == pair.reverse.label;
  return pair;
}

}  // namespace speechjudge::judge
