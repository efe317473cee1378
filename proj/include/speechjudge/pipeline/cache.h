#pragma once

#include <atomic>
#include <concepts>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace speechjudge::pipeline {

/// SHA-256 hex digest of (kind, payload). Stable across processes.
std::string cache_key(std::string_view kind, std::string_view payload);

/// Structured payloads hash their compact dump (keys sorted).
template <class Json>
  requires std::same_as<Json, nlohmann::json>
std::string cache_key(std::string_view kind, const Json& payload) {
  return cache_key(kind, std::string_view(payload.dump()));
}

/// Content-addressed store for model-service responses.
///
/// Readers may run concurrently. At most one caller computes a given key at a
/// time; others wait and then read the stored value. With a directory each
/// entry is persisted via write-then-rename, so several processes may share
/// one cache directory.
class CallCache {
 public:
  CallCache() = default;
  explicit CallCache(std::filesystem::path dir);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, std::string_view value);

  std::string get_or_compute(const std::string& key,
                             const std::function<std::string()>& compute);

  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }
  const std::optional<std::filesystem::path>& dir() const { return dir_; }

 private:
  std::filesystem::path entry_path(const std::string& key) const;
  std::mutex& key_mutex(const std::string& key);

  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mu_;
  mutable std::map<std::string, std::string> memory_;
  std::mutex writers_mu_;
  std::map<std::string, std::unique_ptr<std::mutex>> writers_;
  mutable std::atomic<std::size_t> hits_{0};
  mutable std::atomic<std::size_t> misses_{0};
};

}  // namespace speechjudge::pipeline
