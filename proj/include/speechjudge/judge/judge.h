#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "speechjudge/core/record.h"
#include "speechjudge/judge/clients.h"
#include "speechjudge/judge/prompt.h"

namespace speechjudge::judge {

enum class Backend { kEndToEnd, kCascaded };

/// "e2e" or "cascaded".
std::string_view to_string(Backend backend);
Backend parse_backend(std::string_view text);

struct JudgeRunConfig {
  SamplingParams sampling;
  std::vector<std::uint64_t> run_seeds{42, 123, 1234};
  /// Audio budget for both responses together.
  double max_pair_audio_s = 60.0;
  PromptMode prompt_mode = PromptMode::kTrained;

  /// Throws ConfigError on an empty seed list or a non-positive budget.
  void validate() const;
};

struct TruncationPlan {
  AudioClip first;
  AudioClip second;
  bool truncated = false;
};

/// Clips for two responses in presentation order. When their total exceeds
/// `max_total_s` each is cut to a prefix scaled by the same factor, so the
/// pair totals exactly the budget.
TruncationPlan truncate_pair(const SpeechResponse& first, const SpeechResponse& second,
                             double max_total_s);

struct JudgeCallOptions {
  /// Present response_2 first; the verdict is mapped back to canonical order.
  bool swapped = false;
  pipeline::CallCache* cache = nullptr;
};

/// Key for a stored judge completion.
std::string verdict_cache_key(std::string_view record_id, Aspect aspect, Backend backend,
                              bool swapped, std::uint64_t run_seed,
                              std::string_view prompt_text);

/// Asks the speech judge to compare the two audio responses of `record`.
Verdict judge_pair_e2e(const PreferenceRecord& record, Aspect aspect,
                       const ModelClients& clients, const JudgeRunConfig& config,
                       std::uint64_t run_seed, const JudgeCallOptions& options = {});

/// Transcribes both responses (reusing transcripts already on the record) and
/// asks the text judge with transcripts in place of the audio slots.
Verdict judge_pair_cascaded(const PreferenceRecord& record, Aspect aspect,
                            const ModelClients& clients, const JudgeRunConfig& config,
                            std::uint64_t run_seed, const JudgeCallOptions& options = {});

Verdict judge_pair(const PreferenceRecord& record, Aspect aspect, Backend backend,
                   const ModelClients& clients, const JudgeRunConfig& config,
                   std::uint64_t run_seed, const JudgeCallOptions& options = {});

/// Judges (R1, R2) and (R2, R1). Consistent iff both verdicts are valid and
/// agree once mapped back to canonical order.
OrderPair judge_both_orders(const PreferenceRecord& record, Aspect aspect, Backend backend,
                            const ModelClients& clients, const JudgeRunConfig& config,
                            std::uint64_t run_seed, pipeline::CallCache* cache = nullptr);

}  // namespace speechjudge::judge
