#include "speechjudge/pipeline/export.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "speechjudge/core/errors.h"
#include "speechjudge/core/record_io.h"
#include "speechjudge/core/rng.h"
#include "speechjudge/core/text.h"
#include "speechjudge/judge/prompt.h"
#include "speechjudge/pipeline/manifest.h"

namespace speechjudge::pipeline {

nlohmann::json to_json(const TrainingRecord& r) {
  return {{"record_id", r.record_id},
          {"aspect", to_string(r.aspect)},
          {"prompt", r.prompt},
          {"audio_refs", r.audio_refs},
          {"target", r.target}};
}

TrainingRecord training_record_from_json(const nlohmann::json& j) {
  try {
    TrainingRecord r;
    r.record_id = j.at("record_id").get<std::string>();
    r.aspect = parse_aspect(j.at("aspect").get<std::string>());
    r.prompt = j.at("prompt").get<std::string>();
    r.audio_refs = j.at("audio_refs").get<std::array<std::string, 2>>();
    r.target = j.at("target").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("malformed training record: {}", e.what()));
  }
}

std::string training_target(std::string_view rationale, ComparisonLabel label) {
  const auto text = trim(rationale);
  if (text.empty()) throw DomainError("training target needs a rationale");
  return fmt::format("{}\n<Answer>{}</Answer>", text, answer_token(label));
}

ExportSummary cmd_export_sft(const PipelineConfig& config, int stage) {
  if (stage != 1 && stage != 2) throw ConfigError(fmt::format("stage must be 1 or 2, not {}", stage));
  const auto& dir = config.dataset_dir;
  const auto records = load_dataset_records(dir);

  ExportSummary summary;
  std::vector<TrainingRecord> semantic;
  std::vector<TrainingRecord> acoustic;
  std::map<std::string, TaskFormat> formats;
  for (const auto& r : records) {
    formats[r.id] = r.task_format;
    for (const auto& [aspect, label] : r.labels) {
      if (r.pending_rationales.contains(aspect)) {
        summary.pending.push_back(fmt::format("{}/{}", r.id, to_string(aspect)));
        continue;
      }
      TrainingRecord t;
      t.record_id = r.id;
      t.aspect = aspect;
      t.prompt = judge::render_judge_prompt(aspect, r.instruction).text;
      t.audio_refs = {r.response_1.audio_ref, r.response_2.audio_ref};
      t.target = training_target(r.rationales.at(aspect), label);
      (aspect.is_semantic() ? semantic : acoustic).push_back(std::move(t));
    }
  }

  std::vector<TrainingRecord> out;
  if (stage == 1) {
    out = std::move(semantic);
    summary.semantic = out.size();
  } else {
    const auto want = static_cast<std::size_t>(
        std::llround(config.replay_fraction * static_cast<double>(acoustic.size())));
    const auto take = std::min(want, semantic.size());
    if (take < want) {
      spdlog::warn("replay wants {} semantic records but only {} exist", want, semantic.size());
    }
    Rng rng = make_rng(config.seed, "stage2-replay");
    for (std::size_t k = 0; k < take; ++k) {
      std::swap(semantic[k], semantic[k + uniform_index(rng, semantic.size() - k)]);
    }
    semantic.resize(take);
    summary.semantic = take;
    summary.acoustic = acoustic.size();
    out = std::move(acoustic);
    out.insert(out.end(), std::make_move_iterator(semantic.begin()),
               std::make_move_iterator(semantic.end()));
  }

  const auto file = fmt::format("sft_stage{}.jsonl", stage);
  summary.output = dir / file;
  std::vector<nlohmann::json> rows;
  rows.reserve(out.size());
  for (const auto& t : out) rows.push_back(to_json(t));
  write_json_lines(summary.output, rows);

  Manifest m;
  m.dataset_name = config.dataset_name;
  m.split = config.split;
  m.stage = stage == 1 ? "stage1_semantic" : "stage2_mixed";
  m.record_paths = {file};
  m.record_count = out.size();
  for (const auto& t : out) {
    ++m.counts_by_aspect[to_string(t.aspect)];
    ++m.counts_by_task_format[std::string(to_string(formats.at(t.record_id)))];
  }
  m.rng_seed = config.seed;
  m.tool_versions["speechjudge"] = tool_version();
  write_file_atomic(dir / fmt::format("sft_stage{}.manifest.json", stage),
                    to_json(m).dump(2) + "\n");

  for (const auto& p : summary.pending) spdlog::warn("pending rationale excluded: {}", p);
  return summary;
}

}  // namespace speechjudge::pipeline
