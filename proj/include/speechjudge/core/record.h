#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "speechjudge/core/aspect.h"
#include "speechjudge/core/label.h"
#include "speechjudge/core/style.h"

namespace speechjudge {

/// Shortest audio a filtered response may have, in seconds.
inline constexpr double kMinFilteredDurationS = 0.2;

enum class TaskFormat : std::uint8_t {
  kSemantic,
  kExplicitTts,
  kExplicitDialogue,
  kImplicitDialogue,
};

std::string_view to_string(TaskFormat format);
TaskFormat parse_task_format(std::string_view text);

struct SpeechResponse {
  /// Path relative to the dataset directory (or an opaque URI).
  std::string audio_ref;
  std::string source_text;
  std::string tts_model_id;
  std::optional<StyleControlSpec> style;
  double duration_s = 0.0;
  std::optional<std::string> transcript;
  std::optional<double> wer;
  std::int64_t token_estimate = 0;
  /// Set once the response has passed the corpus filter.
  bool filtered = false;

  bool operator==(const SpeechResponse&) const = default;
};

struct Provenance {
  std::string seed_dataset;
  std::uint64_t rng_seed = 0;
  std::map<std::string, std::string> generator_versions;

  bool operator==(const Provenance&) const = default;
};

/// One evaluation instance: an instruction, two spoken responses and one
/// label (relative to response_1) plus rationale per judged aspect.
struct PreferenceRecord {
  std::string id;
  TaskFormat task_format = TaskFormat::kSemantic;
  std::string instruction;
  SpeechResponse response_1;
  SpeechResponse response_2;
  std::map<Aspect, ComparisonLabel> labels;
  std::map<Aspect, std::string> rationales;
  /// Aspects whose rationale request failed and must be retried before export.
  std::set<Aspect> pending_rationales;
  Provenance provenance;

  bool operator==(const PreferenceRecord&) const = default;

  double combined_duration_s() const {
    return response_1.duration_s + response_2.duration_s;
  }
};

/// One judge output for one aspect.
struct Verdict {
  Aspect aspect = Aspect::helpfulness();
  /// Normalized to the record's canonical order; nullopt when unparseable.
  VerdictLabel label;
  std::string rationale;
  std::string raw_completion;
  bool order_swapped = false;
  std::uint64_t run_seed = 0;
  /// The pair was cut down to fit the judge's audio window.
  bool truncated = false;

  bool valid() const { return label.has_value(); }
  bool operator==(const Verdict&) const = default;
};

}  // namespace speechjudge

namespace speechjudge {

/// Verdicts for the presented order and the swapped order of one pair, both
/// already normalized to the record's canonical order.
struct OrderPair {
  Verdict forward;
  Verdict reverse;
  bool consistent = false;
};

}  // namespace speechjudge
