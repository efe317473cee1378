#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

namespace speechjudge::pipeline {

/// Append-only checkpoint of finished work units, one JSON line each, so an
/// interrupted build can resume without redoing them.
class ProgressLog {
 public:
  explicit ProgressLog(std::filesystem::path path);

  /// Completed units by id. A torn final line (from a crash) is ignored.
  std::map<std::string, nlohmann::json> load() const;

  void append(const std::string& unit_id, const nlohmann::json& result);

  /// Drops the checkpoint once its results are folded into the dataset.
  void clear();

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mu_;
};

}  // namespace speechjudge::pipeline
