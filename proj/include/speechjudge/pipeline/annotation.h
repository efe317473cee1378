#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "speechjudge/core/record.h"

namespace speechjudge::pipeline {

/// One human label for one aspect of one record, in canonical order.
struct Annotation {
  std::string annotator_id;
  std::string record_id;
  Aspect aspect = Aspect::helpfulness();
  ComparisonLabel label = ComparisonLabel::kTie;
  /// Whether the model's rationale supports its own label, when checked.
  std::optional<bool> rationale_consistent;

  bool operator==(const Annotation&) const = default;
};

nlohmann::json to_json(const Annotation& a);
Annotation annotation_from_json(const nlohmann::json& j);

/// JSONL-backed annotation store. Every submission is appended; on load and
/// in memory the last write per (annotator, record, aspect) wins.
class AnnotationStore {
 public:
  explicit AnnotationStore(std::filesystem::path path);

  void upsert(const std::vector<Annotation>& annotations);
  /// Current annotations ordered by (annotator, record, aspect).
  std::vector<Annotation> all() const;
  bool has(std::string_view annotator, std::string_view record, Aspect aspect) const;

 private:
  using Key = std::tuple<std::string, std::string, Aspect>;
  std::filesystem::path path_;
  mutable std::shared_mutex mu_;
  std::map<Key, Annotation> latest_;
};

/// Model labels keyed by (record id, aspect).
using ModelLabels = std::map<std::pair<std::string, Aspect>, VerdictLabel>;

/// Forward verdicts of the first run seed in a verdicts_<backend>.jsonl file.
ModelLabels load_model_labels(const std::filesystem::path& verdicts_path);

struct FacadeReply {
  int status = 200;
  nlohmann::json body;
};

/// Request handlers behind the annotation HTTP facade. Model verdicts are
/// only ever exposed as aggregate agreement, never per pair, so annotators
/// are not anchored.
class AnnotationService {
 public:
  AnnotationService(std::vector<PreferenceRecord> records, ModelLabels model,
                    AnnotationStore& store, std::uint64_t seed = 42);

  /// The first record this annotator has not fully labeled, or a completion
  /// payload with the summary.
  FacadeReply next_pair(std::string_view annotator) const;

  /// Body: {annotator_id, record_id, labels: {aspect: win|lose|tie},
  /// rationale_flags?: {aspect: bool}}. Labels must cover every aspect of the
  /// record.
  FacadeReply submit(const nlohmann::json& body);

  /// Human/model agreement with the metrics pair rule, per aspect and
  /// overall, optionally for one annotator.
  FacadeReply agreement_summary(std::optional<std::string> annotator = std::nullopt) const;

 private:
  const PreferenceRecord* find(std::string_view id) const;

  std::vector<PreferenceRecord> records_;
  ModelLabels model_;
  AnnotationStore& store_;
  std::uint64_t seed_;
};

/// Serves GET /api/next-pair?annotator=, POST /api/annotation,
/// GET /api/agreement-summary[?annotator=] and the dataset audio under
/// /audio/ (static files, byte ranges supported).
class AnnotationServer {
 public:
  AnnotationServer(AnnotationService& service, const std::filesystem::path& dataset_dir);
  ~AnnotationServer();

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks serving until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace speechjudge::pipeline
