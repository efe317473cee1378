#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "speechjudge/core/record.h"
#include "speechjudge/pipeline/config.h"

namespace speechjudge::pipeline {

/// One supervised example: the judge prompt, the two audio refs in prompt
/// order, and a target of rationale followed by the answer tag.
struct TrainingRecord {
  std::string record_id;
  Aspect aspect = Aspect::helpfulness();
  std::string prompt;
  std::array<std::string, 2> audio_refs;
  std::string target;

  bool operator==(const TrainingRecord&) const = default;
};

nlohmann::json to_json(const TrainingRecord& record);
/// Throws IoError on malformed input.
TrainingRecord training_record_from_json(const nlohmann::json& j);

/// "<rationale>\n<Answer>1</Answer>". Throws DomainError on an empty
/// rationale.
std::string training_target(std::string_view rationale, ComparisonLabel label);

/// Training records for `aspect` filter, skipping (and listing) pending ones.
struct ExportSummary {
  std::filesystem::path output;
  std::size_t semantic = 0;
  std::size_t acoustic = 0;
  /// "record_id/aspect" for every excluded pending rationale.
  std::vector<std::string> pending;
};

/// Stage 1: every semantic-aspect judgment. Stage 2: every acoustic judgment
/// plus round(replay_fraction * acoustic) semantic judgments drawn without
/// replacement with the config seed. Writes sft_stage<N>.jsonl and a manifest
/// next to it into the dataset directory.
ExportSummary cmd_export_sft(const PipelineConfig& config, int stage);

}  // namespace speechjudge::pipeline
