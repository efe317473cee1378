#include "speechjudge/pipeline/cache.h"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <sstream>

#include "speechjudge/core/errors.h"
#include "speechjudge/core/record_io.h"

namespace speechjudge::pipeline {

std::string cache_key(std::string_view kind, std::string_view payload) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                               EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 init failed");
  }
  const char sep = '\0';
  EVP_DigestUpdate(ctx.get(), kind.data(), kind.size());
  EVP_DigestUpdate(ctx.get(), &sep, 1);
  EVP_DigestUpdate(ctx.get(), payload.data(), payload.size());
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}


CallCache::CallCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(*dir_);
}

std::filesystem::path CallCache::entry_path(const std::string& key) const {
  return *dir_ / key.substr(0, 2) / key;
}

std::optional<std::string> CallCache::get(const std::string& key) const {
  {
    std::shared_lock lock(mu_);
    if (auto it = memory_.find(key); it != memory_.end()) {
      ++hits_;
      return it->second;
    }
  }
  if (dir_) {
    auto path = entry_path(key);
    if (std::filesystem::exists(path)) {
      auto value = read_file(path);
      std::unique_lock lock(mu_);
      memory_.emplace(key, value);
      ++hits_;
      return value;
    }
  }
  return std::nullopt;
}

void CallCache::put(const std::string& key, std::string_view value) {
  if (dir_) write_file_atomic(entry_path(key), value);
  std::unique_lock lock(mu_);
  memory_.insert_or_assign(key, std::string(value));
}

std::mutex& CallCache::key_mutex(const std::string& key) {
  std::lock_guard lock(writers_mu_);
  auto& slot = writers_[key];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

std::string CallCache::get_or_compute(
    const std::string& key, const std::function<std::string()>& compute) {
  if (auto hit = get(key)) return *hit;
  std::lock_guard writer(key_mutex(key));
  if (auto hit = get(key)) return *hit;
  ++misses_;
  auto value = compute();
  put(key, value);
  return value;
}

}  // namespace speechjudge::pipeline
