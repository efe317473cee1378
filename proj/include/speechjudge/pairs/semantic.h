#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "speechjudge/core/record.h"
#include "speechjudge/filter/filter.h"
#include "speechjudge/filter/sanitize.h"
#include "speechjudge/judge/clients.h"

namespace speechjudge::pairs {

struct RatedResponse {
  std::string text;
  /// One 1-5 score per semantic aspect.
  std::map<Aspect, int> scores;
  std::string source_model_id;
  /// Optional per-aspect rationale from the rating stage.
  std::map<Aspect, std::string> rationales;
};

/// Throws DomainError unless all four semantic aspects carry a score in [1, 5].
void validate_rated_response(const RatedResponse& response);

struct SemanticSeed {
  std::string id;
  std::string instruction;
  std::vector<RatedResponse> responses;
};

RatedResponse rated_response_from_json(const nlohmann::json& j);
SemanticSeed semantic_seed_from_json(const nlohmann::json& j);

struct SemanticBuildOptions {
  std::string tts_model_id = "tts";
  std::string seed_dataset;
  std::uint64_t global_seed = 42;
  std::size_t max_pairs_per_instruction = 6;
  /// Classifier, language detector and token budget. Its cache is ignored in
  /// favour of `cache`.
  filter::FilterContext filter;
  filter::SanitizeOptions sanitize;
  pipeline::CallCache* cache = nullptr;
};

struct SemanticBuildResult {
  std::vector<PreferenceRecord> records;
  /// One row per screened response and per pair dropped for length.
  std::vector<nlohmann::json> filter_rows;
  /// Responses or instructions that could not be processed, with the reason.
  std::vector<std::string> skipped;
};

/// Turns one rated instruction into preference records: sanitize each
/// response, synthesize and transcribe it, screen it, then pair every two
/// survivors (up to the per-instruction cap) with labels from the scores and
/// comparative rationales from the chat client.
SemanticBuildResult build_semantic_instruction(const SemanticSeed& seed,
                                               const judge::ModelClients& clients,
                                               const SemanticBuildOptions& options);

}  // namespace speechjudge::pairs
