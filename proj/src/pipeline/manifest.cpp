#include "speechjudge/pipeline/manifest.h"

#include <fmt/format.h>

#include "speechjudge/core/errors.h"
#include "speechjudge/core/record_io.h"

namespace speechjudge::pipeline {

std::string tool_version() { return "speechjudge 0.1.0"; }

nlohmann::json to_json(const Manifest& m) {
  nlohmann::json j{{"dataset_name", m.dataset_name},
                   {"split", m.split},
                   {"record_paths", m.record_paths},
                   {"record_count", m.record_count},
                   {"counts_by_task_format", m.counts_by_task_format},
                   {"counts_by_aspect", m.counts_by_aspect},
                   {"rng_seed", m.rng_seed},
                   {"tool_versions", m.tool_versions}};
  j["stage"] = m.stage ? nlohmann::json(*m.stage) : nlohmann::json();
  return j;
}

Manifest manifest_from_json(const nlohmann::json& j) {
  try {
    Manifest m;
    m.dataset_name = j.at("dataset_name").get<std::string>();
    m.split = j.at("split").get<std::string>();
    if (!j.at("stage").is_null()) m.stage = j.at("stage").get<std::string>();
    m.record_paths = j.at("record_paths").get<std::vector<std::string>>();
    m.record_count = j.at("record_count").get<std::size_t>();
    m.counts_by_task_format =
        j.at("counts_by_task_format").get<std::map<std::string, std::size_t>>();
    m.counts_by_aspect = j.at("counts_by_aspect").get<std::map<std::string, std::size_t>>();
    m.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    m.tool_versions = j.at("tool_versions").get<std::map<std::string, std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("malformed manifest: {}", e.what()));
  }
}

void recount(Manifest& m, const std::filesystem::path& dir) {
  m.record_count = 0;
  m.counts_by_task_format.clear();
  m.counts_by_aspect.clear();
  for (const auto& rel : m.record_paths) {
    const auto path = dir / rel;
    if (!std::filesystem::exists(path)) {
      throw IoError(fmt::format("manifest lists missing file {}", path.string()));
    }
    for (const auto& r : read_records(path)) {
      ++m.record_count;
      ++m.counts_by_task_format[std::string(to_string(r.task_format))];
      for (const auto& [aspect, label] : r.labels) ++m.counts_by_aspect[to_string(aspect)];
    }
  }
}

std::vector<std::string> verify_manifest(const Manifest& manifest,
                                         const std::filesystem::path& dir) {
  std::vector<std::string> problems;
  for (const auto& rel : manifest.record_paths) {
    if (!std::filesystem::exists(dir / rel)) problems.push_back("missing " + rel);
  }
  if (!problems.empty()) return problems;
  Manifest fresh = manifest;
  recount(fresh, dir);
  if (fresh.record_count != manifest.record_count) {
    problems.push_back(fmt::format("record_count {} but files hold {}", manifest.record_count,
                                   fresh.record_count));
  }
  if (fresh.counts_by_task_format != manifest.counts_by_task_format) {
    problems.emplace_back("counts_by_task_format differ from a recount");
  }
  if (fresh.counts_by_aspect != manifest.counts_by_aspect) {
    problems.emplace_back("counts_by_aspect differ from a recount");
  }
  return problems;
}

Manifest read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / kManifestFile;
  if (!std::filesystem::exists(path)) {
    throw IoError(fmt::format("no manifest in {}", dir.string()));
  }
  try {
    return manifest_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& dir) {
  write_file_atomic(dir / kManifestFile, to_json(manifest).dump(2) + "\n");
}

std::vector<PreferenceRecord> load_dataset_records(const std::filesystem::path& dir) {
  const auto manifest = read_manifest(dir);
  std::vector<PreferenceRecord> out;
  for (const auto& rel : manifest.record_paths) {
    auto part = read_records(dir / rel);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

}  // namespace speechjudge::pipeline
