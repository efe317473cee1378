#include "speechjudge/pairs/semantic.h"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "speechjudge/core/errors.h"
#include "speechjudge/core/rng.h"
#include "speechjudge/filter/classifier.h"
#include "speechjudge/filter/wer.h"
#include "speechjudge/pairs/plan.h"
#include "speechjudge/pairs/rationale.h"
#include "speechjudge/pipeline/cache.h"

namespace speechjudge::pairs {

void validate_rated_response(const RatedResponse& response) {
  for (const auto& aspect : semantic_aspects()) {
    const auto it = response.scores.find(aspect);
    if (it == response.scores.end()) {
      throw DomainError(fmt::format("rated response lacks a {} score", to_string(aspect)));
    }
    if (it->second < 1 || it->second > 5) {
      throw DomainError(fmt::format("{} score {} outside [1, 5]", to_string(aspect), it->second));
    }
  }
  for (const auto& [aspect, score] : response.scores) {
    if (!aspect.is_semantic()) {
      throw DomainError(fmt::format("rated response scores {}", to_string(aspect)));
    }
  }
}

RatedResponse rated_response_from_json(const nlohmann::json& j) {
  RatedResponse r;
  r.text = j.at("text").get<std::string>();
  r.source_model_id = j.value("source_model_id", "");
  for (const auto& [name, score] : j.at("scores").items()) {
    r.scores[parse_aspect(name)] = score.get<int>();
  }
  if (j.contains("rationales")) {
    for (const auto& [name, text] : j.at("rationales").items()) {
      r.rationales[parse_aspect(name)] = text.get<std::string>();
    }
  }
  validate_rated_response(r);
  return r;
}

SemanticSeed semantic_seed_from_json(const nlohmann::json& j) {
  SemanticSeed s;
  s.id = j.at("id").get<std::string>();
  s.instruction = j.at("instruction").get<std::string>();
  for (const auto& r : j.at("responses")) s.responses.push_back(rated_response_from_json(r));
  return s;
}

namespace {

struct Candidate {
  std::size_t index;
  SpeechResponse speech;
  const RatedResponse* rated;
};

nlohmann::json drop_row(const std::string& id, filter::DropReason reason) {
  filter::FilterOutcome outcome;
  outcome.kept = false;
  outcome.drop_reason = reason;
  return filter::filter_report_row(id, outcome);
}

}  // namespace

SemanticBuildResult build_semantic_instruction(const SemanticSeed& seed,
                                               const judge::ModelClients& clients,
                                               const SemanticBuildOptions& options) {
  SemanticBuildResult result;
  if (!clients.synthesizer || !clients.transcriber || !clients.chatter) {
    throw PreconditionError("semantic builds need synthesizer, transcriber and chat clients");
  }
  for (const auto& r : seed.responses) {
    try {
      validate_rated_response(r);
    } catch (const DomainError& e) {
      result.skipped.push_back(fmt::format("{}: {}", seed.id, e.what()));
      return result;
    }
  }

  // Screening calls repeat inside filter_utterance; a local cache keeps that
  // free when the caller supplies none.
  pipeline::CallCache local_cache;
  pipeline::CallCache* cache = options.cache ? options.cache : &local_cache;
  filter::FilterContext ctx = options.filter;
  ctx.cache = cache;
  if (!ctx.classifier || !ctx.detector) {
    throw PreconditionError("semantic builds need a classifier and a language detector");
  }

  std::vector<Candidate> kept;
  for (std::size_t i = 0; i < seed.responses.size(); ++i) {
    const auto& rated = seed.responses[i];
    const auto row_id = fmt::format("{}/r{}", seed.id, i);
    SpeechResponse speech;
    speech.source_text = filter::sanitize_text(rated.text, options.sanitize);
    if (speech.source_text.empty()) {
      result.skipped.push_back(row_id + ": nothing left to speak after sanitizing");
      continue;
    }

    // Cheap text screens first so that rejected items cost no synthesis.
    try {
      if (filter::is_math_or_code(seed.instruction, speech.source_text, *ctx.classifier, cache)) {
        result.filter_rows.push_back(drop_row(row_id, filter::DropReason::kMathOrCode));
        continue;
      }
      bool foreign = false;
      for (std::string_view text : {std::string_view(seed.instruction),
                                    std::string_view(speech.source_text)}) {
        foreign = foreign || filter::screen_language(text, *ctx.detector, ctx.target_language,
                                                     cache) == filter::ScreenDecision::kDrop;
      }
      if (foreign) {
        result.filter_rows.push_back(drop_row(row_id, filter::DropReason::kNonTargetLanguage));
        continue;
      }
    } catch (const ClassificationError& e) {
      result.skipped.push_back(fmt::format("{}: quarantined, {}", row_id, e.what()));
      continue;
    } catch (const ScreeningError& e) {
      result.skipped.push_back(fmt::format("{}: quarantined, {}", row_id, e.what()));
      continue;
    }

    try {
      const auto synth = judge::synthesize_cached(
          *clients.synthesizer,
          {speech.source_text, std::nullopt, options.tts_model_id,
           fmt::format("audio/{}_r{}.wav", seed.id, i)},
          cache);
      speech.audio_ref = synth.audio_ref;
      speech.duration_s = synth.duration_s;
      speech.tts_model_id = synth.tts_model_id;
      speech.transcript = judge::transcribe_cached(
          *clients.transcriber, {speech.audio_ref, 0.0, speech.duration_s, speech.duration_s},
          cache);
    } catch (const TransportError&) {
      throw;
    } catch (const std::exception& e) {
      result.skipped.push_back(fmt::format("{}: {}", row_id, e.what()));
      spdlog::warn("skipping {}: {}", row_id, e.what());
      continue;
    }
    try {
      speech.wer = filter::word_error_rate(speech.source_text, *speech.transcript);
    } catch (const UndefinedWerError& e) {
      result.skipped.push_back(fmt::format("{}: {}", row_id, e.what()));
      continue;
    }
    speech.token_estimate = ctx.budget.estimate_response(speech);

    const auto outcome = filter::filter_utterance(speech, seed.instruction, ctx);
    result.filter_rows.push_back(filter::filter_report_row(row_id, outcome));
    if (!outcome.kept) continue;
    speech.filtered = true;
    kept.push_back({i, std::move(speech), &rated});
  }

  Rng rng = make_rng(options.global_seed, seed.id);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < kept.size(); ++a) {
    for (std::size_t b = a + 1; b < kept.size(); ++b) {
      const auto& x = kept[a];
      const auto& y = kept[b];
      const auto tokens = ctx.budget.estimate_text(seed.instruction) +
                          x.speech.token_estimate + y.speech.token_estimate;
      if (tokens > ctx.budget.max_tokens) {
        result.filter_rows.push_back(
            drop_row(fmt::format("{}/p{}-{}", seed.id, x.index, y.index),
                     filter::DropReason::kTooLongSequence));
        continue;
      }
      pairs.emplace_back(a, b);
    }
  }
  if (pairs.size() > options.max_pairs_per_instruction) {
    // Partial Fisher-Yates, then restore enumeration order.
    for (std::size_t k = 0; k < options.max_pairs_per_instruction; ++k) {
      std::swap(pairs[k], pairs[k + uniform_index(rng, pairs.size() - k)]);
    }
    pairs.resize(options.max_pairs_per_instruction);
    std::sort(pairs.begin(), pairs.end());
  }

  for (auto [a, b] : pairs) {
    const Candidate* first = &kept[a];
    const Candidate* second = &kept[b];
    // Present the pair in a random order so labels are not tied to rank.
    if (fair_coin(rng)) std::swap(first, second);

    PreferenceRecord record;
    record.id = fmt::format("{}-{}-{}", seed.id, first->index, second->index);
    record.task_format = TaskFormat::kSemantic;
    record.instruction = seed.instruction;
    record.response_1 = first->speech;
    record.response_2 = second->speech;
    record.provenance.seed_dataset = options.seed_dataset;
    record.provenance.rng_seed = options.global_seed;
    record.provenance.generator_versions["tts"] = options.tts_model_id;
    record.provenance.generator_versions["response_1"] = first->rated->source_model_id;
    record.provenance.generator_versions["response_2"] = second->rated->source_model_id;

    for (const auto& aspect : semantic_aspects()) {
      const auto label =
          scores_to_pairwise(first->rated->scores.at(aspect), second->rated->scores.at(aspect));
      record.labels[aspect] = label;
      auto note = [&](const Candidate* c) {
        const auto it = c->rated->rationales.find(aspect);
        return it == c->rated->rationales.end() ? std::string() : it->second;
      };
      try {
        record.rationales[aspect] = rewrite_rationale_comparative(
            seed.instruction, first->speech.source_text, second->speech.source_text, label,
            aspect, *clients.chatter, cache, note(first), note(second));
      } catch (const std::exception& e) {
        spdlog::warn("rationale {} for {} pending: {}", to_string(aspect), record.id, e.what());
        record.rationales[aspect] = "";
        record.pending_rationales.insert(aspect);
      }
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

}  // namespace speechjudge::pairs
