#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "speechjudge/core/record.h"
#include "speechjudge/core/rng.h"
#include "speechjudge/judge/clients.h"
#include "speechjudge/pairs/plan.h"
#include "speechjudge/pairs/templates.h"

namespace speechjudge::pairs {

/// What an explicit instruction asks the speaker to control.
enum class StyleRequest { kEmotion, kGender, kVoice, kMixed };

std::string_view to_string(StyleRequest request);
StyleRequest parse_style_request(std::string_view text);

struct AcousticSeed {
  std::string id;
  /// The user question for dialogue formats. Unused for TTS.
  std::string query;
  /// TTS: texts to read, one is chosen. Dialogue: candidate replies, two are
  /// chosen without replacement when possible.
  std::vector<std::string> candidate_texts;
  /// Implicit dialogue only: the emotion an appropriate reply should carry.
  std::optional<std::string> implied_emotion;
};

/// {id, query?, texts | responses | text, implied_emotion?}
AcousticSeed acoustic_seed_from_json(const nlohmann::json& j);

struct AcousticJob {
  std::string record_id;
  TaskFormat format = TaskFormat::kExplicitTts;
  /// Ignored for implicit dialogue, which always targets emotion.
  StyleRequest request = StyleRequest::kEmotion;
  AcousticSeed seed;
};

struct AcousticBuildOptions {
  std::vector<std::string> voice_roster;
  std::string tts_model_id = "tts";
  std::string seed_dataset;
  std::uint64_t global_seed = 42;
  const TemplateBank* bank = nullptr;
  pipeline::CallCache* cache = nullptr;
};

struct BuildOutcome {
  std::optional<PreferenceRecord> record;
  /// Why no record was produced; empty when one was.
  std::string skip_reason;
};

/// Draws the requested style uniformly from its vocabulary (polar emotions,
/// genders, roster voices).
StyleControlSpec draw_target(StyleRequest request, Rng& rng,
                             std::span<const std::string> voice_roster);

/// Speech sub-kind judged for a task format and request.
SpeechSubKind sub_kind_for(TaskFormat format, StyleRequest request);

/// Builds one acoustic preference record. The RNG is derived from the global
/// seed and the record id, so jobs can run in any order. A synthesis failure
/// yields no record; a rationale failure keeps the record with its rationale
/// marked pending.
BuildOutcome build_acoustic_instance(const AcousticJob& job, const judge::ModelClients& clients,
                                     const AcousticBuildOptions& options);

}  // namespace speechjudge::pairs
