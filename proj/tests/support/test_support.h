#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "speechjudge/core/record.h"

namespace sjtest {

inline std::filesystem::path fixtures_dir() { return SJ_FIXTURES_DIR; }

// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "sj") {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline speechjudge::SpeechResponse make_response(std::string ref, std::string text,
                                                 double duration_s) {
  speechjudge::SpeechResponse r;
  r.audio_ref = std::move(ref);
  r.source_text = std::move(text);
  r.tts_model_id = "tts";
  r.duration_s = duration_s;
  return r;
}

// Semantic record with all four aspects labeled `label`.
inline speechjudge::PreferenceRecord make_semantic_record(
    const std::string& id, speechjudge::ComparisonLabel label, double d1 = 3.0,
    double d2 = 4.0) {
  using namespace speechjudge;
  PreferenceRecord rec;
  rec.id = id;
  rec.task_format = TaskFormat::kSemantic;
  rec.instruction = "Explain " + id;
  rec.response_1 = make_response("audio/" + id + "_1.wav", "first answer to " + id, d1);
  rec.response_2 = make_response("audio/" + id + "_2.wav", "second answer to " + id, d2);
  for (const auto& a : semantic_aspects()) {
    rec.labels[a] = label;
    rec.rationales[a] = "because " + id;
  }
  rec.provenance.seed_dataset = "unit";
  rec.provenance.rng_seed = 42;
  return rec;
}

}  // namespace sjtest
