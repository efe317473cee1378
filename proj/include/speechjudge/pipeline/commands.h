#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "speechjudge/metrics/metrics.h"
#include "speechjudge/pairs/acoustic.h"
#include "speechjudge/pipeline/config.h"
#include "speechjudge/pipeline/manifest.h"

namespace speechjudge::pipeline {

/// Screens, pairs, synthesizes and annotates the rated corpus into
/// semantic.jsonl, with filter_report.jsonl alongside. Finished instructions
/// are checkpointed; a transport failure aborts with the checkpoint kept, and
/// a rerun resumes from it.
Manifest cmd_build_semantic(const PipelineConfig& config, const Services& services);

/// Expands the configured counts into jobs (stable ids, seeds drawn per id).
std::vector<pairs::AcousticJob> plan_acoustic_jobs(const PipelineConfig& config);

/// Builds acoustic.jsonl from the planned jobs, checkpointed like the
/// semantic build.
Manifest cmd_build_acoustic(const PipelineConfig& config, const Services& services);

struct JudgeOutcome {
  metrics::MetricReport report;
  std::vector<metrics::MetricReport> per_run;
  std::filesystem::path verdicts_path;
  std::filesystem::path report_path;
};

/// Judges every labeled aspect of every record once per run seed (twice with
/// both_orders), writes verdicts_<backend>.jsonl and report_<backend>.json,
/// and returns the seed-averaged report. Transport failures after retries are
/// scored as invalid verdicts and counted in the report.
// Verdicts are cached under dataset_dir/cache/judge-<hash of client_tag>, so
// switching judges never replays another judge's answers. The tag defaults
// to config.judge_client (plus endpoint URLs and models for "http").
JudgeOutcome cmd_judge(const PipelineConfig& config, const judge::ModelClients& clients,
                       std::optional<std::string> client_tag = std::nullopt);

/// The stored report for `backend` as a text table.
std::string cmd_report(const std::filesystem::path& dataset_dir, judge::Backend backend);

/// Accuracy reward over |difference| = 0..4 as text.
std::string cmd_reward_table(double sigma);

}  // namespace speechjudge::pipeline
