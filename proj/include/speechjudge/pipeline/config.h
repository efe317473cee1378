#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "speechjudge/core/record.h"
#include "speechjudge/filter/language.h"
#include "speechjudge/judge/clients.h"
#include "speechjudge/judge/judge.h"
#include "speechjudge/pairs/acoustic.h"

namespace speechjudge::pipeline {

struct AcousticCounts {
  std::map<pairs::StyleRequest, std::size_t> tts;
  /// May include kMixed.
  std::map<pairs::StyleRequest, std::size_t> dialogue;
  std::size_t implicit = 0;

  std::size_t total() const;
};

/// Full-scale instance counts: 1,000 per category and format, 180 mixed,
/// 500 implicit.
AcousticCounts default_acoustic_counts();

struct PipelineConfig {
  std::filesystem::path dataset_dir;
  std::string dataset_name = "speechfeedback";
  std::string split = "train";
  std::uint64_t seed = 42;
  int concurrency = 4;
  /// "simulated" (offline stand-ins) or "http" (SPEECHJUDGE_* endpoints).
  std::string clients = "simulated";
  std::optional<std::filesystem::path> audit_log;

  std::string target_language = "en";
  std::int64_t max_tokens = 4096;
  double speech_tokens_per_second = 0.0;
  std::string tts_model_id = "tts";

  std::optional<std::filesystem::path> semantic_corpus;
  std::size_t max_pairs_per_instruction = 6;

  std::optional<std::filesystem::path> tts_seeds;
  std::optional<std::filesystem::path> dialogue_seeds;
  std::optional<std::filesystem::path> implicit_seeds;
  std::optional<std::filesystem::path> template_dir;
  std::vector<std::string> voice_roster;
  AcousticCounts counts = default_acoustic_counts();

  judge::Backend backend = judge::Backend::kEndToEnd;
  /// Empty means every labeled aspect.
  std::vector<Aspect> aspects;
  judge::JudgeRunConfig judge;
  bool both_orders = false;
  /// "oracle", "constant:<completion>" or "http".
  std::string judge_client = "oracle";
  std::optional<std::vector<double>> length_bucket_edges;

  /// Stage-2 semantic replay, as a fraction of the acoustic record count.
  double replay_fraction = 1.0;

  void validate() const;
};

/// Relative paths are resolved against `base_dir`. Unknown keys are errors.
PipelineConfig config_from_json(const nlohmann::json& j,
                                const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

struct Services {
  judge::ModelClients clients;
  std::shared_ptr<filter::LanguageDetector> detector;
};

/// Clients for dataset construction, per `config.clients`.
Services make_build_services(const PipelineConfig& config);

/// Clients for judging `records`, per `config.judge_client`.
judge::ModelClients make_judge_clients(const PipelineConfig& config,
                                       std::span<const PreferenceRecord> records);

}  // namespace speechjudge::pipeline
