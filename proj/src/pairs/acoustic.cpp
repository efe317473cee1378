#include "speechjudge/pairs/acoustic.h"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "speechjudge/core/errors.h"
#include "speechjudge/core/text.h"
#include "speechjudge/pairs/rationale.h"

namespace speechjudge::pairs {

std::string_view to_string(StyleRequest request) {
  switch (request) {
    case StyleRequest::kEmotion: return "emotion";
    case StyleRequest::kGender: return "gender";
    case StyleRequest::kVoice: return "voice";
    case StyleRequest::kMixed: return "mixed";
  }
  return "?";
}

StyleRequest parse_style_request(std::string_view text) {
  for (auto r : {StyleRequest::kEmotion, StyleRequest::kGender, StyleRequest::kVoice,
                 StyleRequest::kMixed}) {
    if (to_string(r) == text) return r;
  }
  throw ConfigError(fmt::format("unknown style request '{}'", text));
}

AcousticSeed acoustic_seed_from_json(const nlohmann::json& j) {
  AcousticSeed seed;
  try {
    seed.id = j.at("id").get<std::string>();
    seed.query = j.value("query", "");
    if (j.contains("texts")) {
      seed.candidate_texts = j.at("texts").get<std::vector<std::string>>();
    } else if (j.contains("responses")) {
      seed.candidate_texts = j.at("responses").get<std::vector<std::string>>();
    } else if (j.contains("text")) {
      seed.candidate_texts.push_back(j.at("text").get<std::string>());
    }
    if (j.contains("implied_emotion")) {
      seed.implied_emotion = j.at("implied_emotion").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("bad acoustic seed: {}", e.what()));
  }
  return seed;
}

StyleControlSpec draw_target(StyleRequest request, Rng& rng,
                             std::span<const std::string> voice_roster) {
  auto pick = [&](auto& vocab) {
    return std::string(vocab[uniform_index(rng, std::size(vocab))]);
  };
  switch (request) {
    case StyleRequest::kEmotion:
      return {StyleCategory::kEmotion, pick(kPolarEmotions), false, std::nullopt};
    case StyleRequest::kGender:
      return {StyleCategory::kGender, pick(kGenderVocabulary), false, std::nullopt};
    case StyleRequest::kVoice:
      if (voice_roster.empty()) throw ConfigError("voice requests need a voice roster");
      return {StyleCategory::kVoice, voice_roster[uniform_index(rng, voice_roster.size())],
              false, std::nullopt};
    case StyleRequest::kMixed: {
      auto emotion = pick(kPolarEmotions);
      return {StyleCategory::kEmotion, std::move(emotion), true, pick(kGenderVocabulary)};
    }
  }
  throw ConfigError("unknown style request");
}

SpeechSubKind sub_kind_for(TaskFormat format, StyleRequest request) {
  if (format == TaskFormat::kImplicitDialogue) return SpeechSubKind::kImplicitEmotion;
  switch (request) {
    case StyleRequest::kEmotion: return SpeechSubKind::kEmotion;
    case StyleRequest::kGender: return SpeechSubKind::kGender;
    case StyleRequest::kVoice: return SpeechSubKind::kVoice;
    case StyleRequest::kMixed: return SpeechSubKind::kMixed;
  }
  return SpeechSubKind::kEmotion;
}

BuildOutcome build_acoustic_instance(const AcousticJob& job, const judge::ModelClients& clients,
                                     const AcousticBuildOptions& options) {
  if (job.format == TaskFormat::kSemantic) {
    throw PreconditionError("acoustic builder called with the semantic task format");
  }
  if (job.seed.candidate_texts.empty()) {
    throw PreconditionError(fmt::format("seed {} has no candidate texts", job.seed.id));
  }
  if (!clients.synthesizer || !clients.chatter) {
    throw PreconditionError("acoustic builds need a synthesizer and a chat client");
  }
  Rng rng = make_rng(options.global_seed, job.record_id);
  const auto& texts = job.seed.candidate_texts;

  StyleControlSpec target;
  if (job.format == TaskFormat::kImplicitDialogue) {
    if (!job.seed.implied_emotion || !emotion_polarity(*job.seed.implied_emotion)) {
      throw PreconditionError(
          fmt::format("implicit seed {} needs a polar implied_emotion", job.seed.id));
    }
    target = {StyleCategory::kEmotion, *job.seed.implied_emotion, false, std::nullopt};
  } else {
    target = draw_target(job.request, rng, options.voice_roster);
  }

  std::string instruction;
  std::string text_1;
  std::string text_2;
  if (job.format == TaskFormat::kExplicitTts) {
    text_1 = text_2 = texts[uniform_index(rng, texts.size())];
  } else {
    const auto a = uniform_index(rng, texts.size());
    auto b = a;
    if (texts.size() > 1) {
      b = uniform_index(rng, texts.size() - 1);
      if (b >= a) ++b;
    }
    text_1 = texts[a];
    text_2 = texts[b];
  }
  if (job.format == TaskFormat::kImplicitDialogue) {
    instruction = job.seed.query;
  } else {
    if (!options.bank) throw PreconditionError("explicit formats need a template bank");
    const auto style_line = render_style_instruction(target, job.format, *options.bank, rng);
    instruction = style_line + "\n" +
                  (job.format == TaskFormat::kExplicitTts ? text_1 : job.seed.query);
  }

  const PairPlan plan = sample_pair_plan(target, rng, options.voice_roster);

  PreferenceRecord record;
  record.id = job.record_id;
  record.task_format = job.format;
  record.instruction = instruction;
  record.provenance.seed_dataset = options.seed_dataset;
  record.provenance.rng_seed = options.global_seed;
  record.provenance.generator_versions["tts"] = options.tts_model_id;
  record.provenance.generator_versions["plan"] = std::string(to_string(plan.plan_kind));

  int side = 0;
  for (auto [response, text, style] :
       {std::tuple{&record.response_1, &text_1, &plan.style_1},
        std::tuple{&record.response_2, &text_2, &plan.style_2}}) {
    ++side;
    judge::SynthesisRequest request{*text, *style, options.tts_model_id,
                                    fmt::format("audio/{}_{}.wav", job.record_id, side)};
    try {
      const auto result = judge::synthesize_cached(*clients.synthesizer, request, options.cache);
      response->audio_ref = result.audio_ref;
      response->duration_s = result.duration_s;
      response->tts_model_id = result.tts_model_id;
    } catch (const TransportError&) {
      throw;  // unreachable service: the command aborts and checkpoints
    } catch (const std::exception& e) {
      auto reason = fmt::format("synthesis of response {} failed: {}", side, e.what());
      spdlog::warn("skipping {}: {}", job.record_id, reason);
      return {std::nullopt, std::move(reason)};
    }
    response->source_text = *text;
    response->style = *style;
  }

  const Aspect aspect = Aspect::speech(sub_kind_for(job.format, job.request));
  record.labels[aspect] = plan.acoustic_label;
  try {
    record.rationales[aspect] =
        job.format == TaskFormat::kImplicitDialogue
            ? request_implicit_rationale(instruction, target, plan.style_1, plan.style_2,
                                         plan.acoustic_label, *clients.chatter, options.cache)
            : request_acoustic_rationale(instruction, text_1, text_2, plan.style_1,
                                         plan.style_2, plan.acoustic_label, *clients.chatter,
                                         options.cache);
  } catch (const std::exception& e) {
    spdlog::warn("rationale for {} pending: {}", job.record_id, e.what());
    record.rationales[aspect] = "";
    record.pending_rationales.insert(aspect);
  }
  return {std::move(record), ""};
}

}  // namespace speechjudge::pairs
