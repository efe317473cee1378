#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "speechjudge/core/record.h"

namespace speechjudge::pipeline {

// Dataset directory layout.
inline constexpr std::string_view kManifestFile = "manifest.json";
inline constexpr std::string_view kSemanticRecords = "semantic.jsonl";
inline constexpr std::string_view kAcousticRecords = "acoustic.jsonl";
inline constexpr std::string_view kFilterReport = "filter_report.jsonl";
inline constexpr std::string_view kAudioDir = "audio";
inline constexpr std::string_view kCacheDir = "cache";
inline constexpr std::string_view kProgressDir = "progress";

struct Manifest {
  std::string dataset_name;
  std::string split = "train";
  /// "stage1_semantic" or "stage2_mixed" for exports; unset for built data.
  std::optional<std::string> stage;
  /// Relative to the dataset directory.
  std::vector<std::string> record_paths;
  std::size_t record_count = 0;
  std::map<std::string, std::size_t> counts_by_task_format;
  std::map<std::string, std::size_t> counts_by_aspect;
  std::uint64_t rng_seed = 0;
  std::map<std::string, std::string> tool_versions;

  bool operator==(const Manifest&) const = default;
};

nlohmann::json to_json(const Manifest& manifest);
Manifest manifest_from_json(const nlohmann::json& j);

/// Sets the counts of `manifest` from the records under `dir`. Throws IoError
/// when a listed file is missing.
void recount(Manifest& manifest, const std::filesystem::path& dir);

/// Empty when counts match a recount and every path resolves; otherwise one
/// message per discrepancy.
std::vector<std::string> verify_manifest(const Manifest& manifest,
                                         const std::filesystem::path& dir);

Manifest read_manifest(const std::filesystem::path& dir);
void write_manifest(const Manifest& manifest, const std::filesystem::path& dir);

/// Every record listed by the manifest in `dir`, in file order.
std::vector<PreferenceRecord> load_dataset_records(const std::filesystem::path& dir);

/// Version string stamped into manifests.
std::string tool_version();

}  // namespace speechjudge::pipeline
