#include "speechjudge/pipeline/commands.h"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "speechjudge/core/errors.h"
#include "speechjudge/core/record_io.h"
#include "speechjudge/core/rng.h"
#include "speechjudge/core/validate.h"
#include "speechjudge/pairs/semantic.h"
#include "speechjudge/pipeline/cache.h"
#include "speechjudge/pipeline/parallel.h"
#include "speechjudge/pipeline/progress.h"
#include "speechjudge/reward/reward.h"

namespace speechjudge::pipeline {
namespace {

void update_manifest(const PipelineConfig& config, std::string_view record_file) {
  const auto& dir = config.dataset_dir;
  Manifest m;
  if (std::filesystem::exists(dir / kManifestFile)) m = read_manifest(dir);
  m.dataset_name = config.dataset_name;
  m.split = config.split;
  m.rng_seed = config.seed;
  m.tool_versions["speechjudge"] = tool_version();
  m.tool_versions["tts"] = config.tts_model_id;
  if (std::find(m.record_paths.begin(), m.record_paths.end(), record_file) ==
      m.record_paths.end()) {
    m.record_paths.emplace_back(record_file);
    std::sort(m.record_paths.begin(), m.record_paths.end());
  }
  recount(m, dir);
  write_manifest(m, dir);
}

void check_records(const std::vector<PreferenceRecord>& records, const PipelineConfig& config) {
  std::set<std::string> ids;
  for (const auto& r : records) {
    if (!ids.insert(r.id).second) throw Error(fmt::format("duplicate record id {}", r.id));
    const auto problems = validate_record(r, config.voice_roster);
    if (!problems.empty()) {
      throw Error(fmt::format("built record {} is invalid: {}", r.id, problems.front()));
    }
  }
}

/// Runs `build(i)` for every unit not already in the checkpoint, appending
/// each result as it finishes. Returns all results in unit order.
template <class Build>
std::vector<nlohmann::json> run_checkpointed(const std::vector<std::string>& unit_ids,
                                             ProgressLog& progress, int concurrency,
                                             Build&& build) {
  const auto done = progress.load();
  std::vector<nlohmann::json> results(unit_ids.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < unit_ids.size(); ++i) {
    const auto it = done.find(unit_ids[i]);
    if (it != done.end()) {
      results[i] = it->second;
    } else {
      pending.push_back(i);
    }
  }
  if (!done.empty()) spdlog::info("resuming: {} of {} units already done", done.size(), unit_ids.size());

  std::atomic<bool> aborted{false};
  std::atomic<std::size_t> finished{0};
  std::string abort_reason;
  std::mutex abort_mu;
  parallel_for(pending.size(), concurrency, [&](std::size_t k) {
    if (aborted) return;
    const auto i = pending[k];
    try {
      results[i] = build(i);
    } catch (const TransportError& e) {
      std::lock_guard lock(abort_mu);
      if (!aborted) abort_reason = e.what();
      aborted = true;
      return;
    }
    progress.append(unit_ids[i], results[i]);
    ++finished;
  });
  if (aborted) {
    throw TransportError(fmt::format("{}; {} of {} units checkpointed in {}", abort_reason,
                                     done.size() + finished, unit_ids.size(),
                                     progress.path().string()));
  }
  return results;
}

std::vector<std::string> unique_ids(const std::vector<std::string>& ids, std::string_view what) {
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw ConfigError(fmt::format("duplicate {} id '{}'", what, id));
  }
  return ids;
}

std::vector<pairs::AcousticSeed> load_acoustic_seeds(
    const std::optional<std::filesystem::path>& path, std::string_view what) {
  if (!path) throw ConfigError(fmt::format("acoustic.{} is required for the configured counts", what));
  std::vector<pairs::AcousticSeed> seeds;
  for (const auto& j : read_json_lines(*path)) seeds.push_back(pairs::acoustic_seed_from_json(j));
  if (seeds.empty()) throw ConfigError(fmt::format("{} is empty", path->string()));
  return seeds;
}

}  // namespace

Manifest cmd_build_semantic(const PipelineConfig& config, const Services& services) {
  if (!config.semantic_corpus) throw ConfigError("semantic.corpus is not configured");
  std::vector<pairs::SemanticSeed> seeds;
  for (const auto& j : read_json_lines(*config.semantic_corpus)) {
    try {
      seeds.push_back(pairs::semantic_seed_from_json(j));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(fmt::format("bad corpus line in {}: {}",
                                    config.semantic_corpus->string(), e.what()));
    }
  }
  std::vector<std::string> ids;
  for (const auto& s : seeds) ids.push_back(s.id);
  unique_ids(ids, "corpus");

  const auto& dir = config.dataset_dir;
  std::filesystem::create_directories(dir / kAudioDir);
  CallCache cache(dir / kCacheDir);

  pairs::SemanticBuildOptions options;
  options.tts_model_id = config.tts_model_id;
  options.seed_dataset = config.semantic_corpus->filename().string();
  options.global_seed = config.seed;
  options.max_pairs_per_instruction = config.max_pairs_per_instruction;
  options.filter.classifier = services.clients.chatter.get();
  options.filter.detector = services.detector.get();
  options.filter.target_language = config.target_language;
  options.filter.budget.max_tokens = config.max_tokens;
  options.filter.budget.speech_tokens_per_second = config.speech_tokens_per_second;
  options.cache = &cache;

  ProgressLog progress(dir / kProgressDir / "semantic.jsonl");
  const auto results = run_checkpointed(ids, progress, config.concurrency, [&](std::size_t i) {
    const auto built = pairs::build_semantic_instruction(seeds[i], services.clients, options);
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : built.records) records.push_back(to_json(r));
    return nlohmann::json{{"records", records},
                          {"filter_rows", built.filter_rows},
                          {"skipped", built.skipped}};
  });

  std::vector<PreferenceRecord> records;
  std::vector<nlohmann::json> rows;
  std::size_t skipped = 0;
  for (const auto& r : results) {
    for (const auto& j : r.at("records")) records.push_back(record_from_json(j));
    for (const auto& j : r.at("filter_rows")) rows.push_back(j);
    for (const auto& s : r.at("skipped")) {
      spdlog::warn("{}", s.get<std::string>());
      ++skipped;
    }
  }
  check_records(records, config);
  write_records(dir / kSemanticRecords, records);
  write_json_lines(dir / kFilterReport, rows);
  update_manifest(config, kSemanticRecords);
  progress.clear();
  spdlog::info("semantic build: {} instructions, {} records, {} screened items, {} skipped",
               seeds.size(), records.size(), rows.size(), skipped);
  return read_manifest(dir);
}

std::vector<pairs::AcousticJob> plan_acoustic_jobs(const PipelineConfig& config) {
  using pairs::StyleRequest;
  std::vector<pairs::AcousticJob> jobs;
  auto add = [&](TaskFormat format, std::string_view tag, StyleRequest request, std::size_t n,
                 const std::vector<pairs::AcousticSeed>& pool) {
    for (std::size_t i = 0; i < n; ++i) {
      pairs::AcousticJob job;
      job.record_id = fmt::format("{}-{}-{:05d}", tag, to_string(request), i);
      job.format = format;
      job.request = request;
      Rng rng = make_rng(config.seed, "seed-pick/" + job.record_id);
      job.seed = pool[uniform_index(rng, pool.size())];
      jobs.push_back(std::move(job));
    }
  };
  const auto needs = [](const std::map<StyleRequest, std::size_t>& m) {
    for (const auto& [r, n] : m) {
      if (n > 0) return true;
    }
    return false;
  };
  if (needs(config.counts.tts)) {
    const auto pool = load_acoustic_seeds(config.tts_seeds, "tts_seeds");
    for (const auto& [request, n] : config.counts.tts) {
      add(TaskFormat::kExplicitTts, "tts", request, n, pool);
    }
  }
  if (needs(config.counts.dialogue)) {
    const auto pool = load_acoustic_seeds(config.dialogue_seeds, "dialogue_seeds");
    for (const auto& [request, n] : config.counts.dialogue) {
      add(TaskFormat::kExplicitDialogue, "dialogue", request, n, pool);
    }
  }
  if (config.counts.implicit > 0) {
    const auto pool = load_acoustic_seeds(config.implicit_seeds, "implicit_seeds");
    add(TaskFormat::kImplicitDialogue, "implicit", StyleRequest::kEmotion, config.counts.implicit,
        pool);
  }
  return jobs;
}

Manifest cmd_build_acoustic(const PipelineConfig& config, const Services& services) {
  const auto jobs = plan_acoustic_jobs(config);
  const auto& dir = config.dataset_dir;
  std::filesystem::create_directories(dir / kAudioDir);
  CallCache cache(dir / kCacheDir);
  const auto bank = config.template_dir ? pairs::TemplateBank::from_directory(*config.template_dir)
                                        : pairs::TemplateBank::embedded();

  pairs::AcousticBuildOptions options;
  options.voice_roster = config.voice_roster;
  options.tts_model_id = config.tts_model_id;
  options.seed_dataset = "acoustic-seeds";
  options.global_seed = config.seed;
  options.bank = &bank;
  options.cache = &cache;

  std::vector<std::string> ids;
  for (const auto& j : jobs) ids.push_back(j.record_id);
  ProgressLog progress(dir / kProgressDir / "acoustic.jsonl");
  const auto results = run_checkpointed(ids, progress, config.concurrency, [&](std::size_t i) {
    const auto outcome = pairs::build_acoustic_instance(jobs[i], services.clients, options);
    return nlohmann::json{
        {"record", outcome.record ? to_json(*outcome.record) : nlohmann::json()},
        {"skip_reason", outcome.skip_reason}};
  });

  std::vector<PreferenceRecord> records;
  std::size_t skipped = 0;
  for (const auto& r : results) {
    if (r.at("record").is_null()) {
      ++skipped;
    } else {
      records.push_back(record_from_json(r.at("record")));
    }
  }
  check_records(records, config);
  write_records(dir / kAcousticRecords, records);
  update_manifest(config, kAcousticRecords);
  progress.clear();
  spdlog::info("acoustic build: {} jobs, {} records, {} skipped", jobs.size(), records.size(),
               skipped);
  return read_manifest(dir);
}

namespace {

std::string default_client_tag(const PipelineConfig& config) {
  std::string tag = config.judge_client;
  if (tag != "http") return tag;
  for (const char* var : {"SPEECHJUDGE_JUDGE_URL", "SPEECHJUDGE_JUDGE_MODEL",
                          "SPEECHJUDGE_CHAT_URL", "SPEECHJUDGE_CHAT_MODEL",
                          "SPEECHJUDGE_TRANSCRIBE_URL", "SPEECHJUDGE_TRANSCRIBE_MODEL"}) {
    const char* v = std::getenv(var);
    tag += fmt::format("|{}={}", var, v ? v : "");
  }
  return tag;
}

}  // namespace

JudgeOutcome cmd_judge(const PipelineConfig& config, const judge::ModelClients& clients,
                       std::optional<std::string> client_tag) {
  config.judge.validate();
  const auto& dir = config.dataset_dir;
  const auto records = load_dataset_records(dir);
  const std::set<Aspect> wanted(config.aspects.begin(), config.aspects.end());

  struct Task {
    std::size_t record;
    Aspect aspect;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (auto seed : config.judge.run_seeds) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      for (const auto& [aspect, label] : records[i].labels) {
        if (wanted.empty() || wanted.contains(aspect)) tasks.push_back({i, aspect, seed});
      }
    }
  }
  if (tasks.empty()) throw ConfigError("nothing to judge: no record carries a selected aspect");

  const auto tag = client_tag.value_or(default_client_tag(config));
  CallCache cache(dir / kCacheDir / ("judge-" + cache_key("client", tag).substr(0, 16)));
  std::vector<OrderPair> results(tasks.size());
  std::vector<char> failed(tasks.size(), 0);
  parallel_for(tasks.size(), config.concurrency, [&](std::size_t k) {
    const auto& t = tasks[k];
    const auto& record = records[t.record];
    try {
      if (config.both_orders) {
        results[k] = judge::judge_both_orders(record, t.aspect, config.backend, clients,
                                              config.judge, t.seed, &cache);
      } else {
        results[k].forward = judge::judge_pair(record, t.aspect, config.backend, clients,
                                               config.judge, t.seed, {false, &cache});
      }
    } catch (const TransportError& e) {
      spdlog::warn("{} / {} / seed {}: {}", record.id, to_string(t.aspect), t.seed, e.what());
      failed[k] = 1;
      Verdict v;
      v.aspect = t.aspect;
      v.run_seed = t.seed;
      results[k].forward = v;
      results[k].reverse = v;
      results[k].reverse.order_swapped = true;
      results[k].consistent = false;
    }
  });

  std::vector<nlohmann::json> lines;
  std::vector<metrics::MetricReport> runs;
  for (auto seed : config.judge.run_seeds) {
    std::map<std::pair<std::string, Aspect>, Verdict> forward;
    std::vector<OrderPair> order_pairs;
    std::size_t errors = 0;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      if (tasks[k].seed != seed) continue;
      const auto& id = records[tasks[k].record].id;
      forward[{id, tasks[k].aspect}] = results[k].forward;
      if (config.both_orders) order_pairs.push_back(results[k]);
      errors += failed[k];
      nlohmann::json line{{"record_id", id},
                          {"backend", to_string(config.backend)},
                          {"transport_error", failed[k] != 0},
                          {"forward", to_json(results[k].forward)}};
      if (config.both_orders) {
        line["reverse"] = to_json(results[k].reverse);
        line["consistent"] = results[k].consistent;
      }
      lines.push_back(std::move(line));
    }
    std::vector<PreferenceRecord> judged;
    std::set<std::string> judged_ids;
    for (const auto& [key, v] : forward) judged_ids.insert(key.first);
    for (const auto& r : records) {
      if (!judged_ids.contains(r.id)) continue;
      PreferenceRecord view = r;
      std::erase_if(view.labels, [&](const auto& kv) {
        return !forward.contains({r.id, kv.first});
      });
      judged.push_back(std::move(view));
    }
    const auto pairs = metrics::score_pairs(judged, forward);
    auto report = metrics::compute_report(pairs, seed, order_pairs, config.length_bucket_edges);
    report.transport_errors = errors;
    runs.push_back(std::move(report));
  }

  JudgeOutcome out;
  out.report = metrics::aggregate_runs(runs);
  out.per_run = runs;
  const auto backend = std::string(to_string(config.backend));
  out.verdicts_path = dir / fmt::format("verdicts_{}.jsonl", backend);
  out.report_path = dir / fmt::format("report_{}.json", backend);
  write_json_lines(out.verdicts_path, lines);
  nlohmann::json per_run = nlohmann::json::array();
  for (const auto& r : runs) per_run.push_back(metrics::to_json(r));
  write_file_atomic(out.report_path,
                    nlohmann::json{{"backend", backend},
                                   {"both_orders", config.both_orders},
                                   {"aggregate", metrics::to_json(out.report)},
                                   {"runs", per_run}}
                            .dump(2) +
                        "\n");
  return out;
}

std::string cmd_report(const std::filesystem::path& dataset_dir, judge::Backend backend) {
  const auto path = dataset_dir / fmt::format("report_{}.json", to_string(backend));
  if (!std::filesystem::exists(path)) {
    throw IoError(fmt::format("no report at {}; run judge first", path.string()));
  }
  const auto j = nlohmann::json::parse(read_file(path));
  return metrics::render_table(metrics::report_from_json(j.at("aggregate")),
                               std::string(to_string(backend)));
}

std::string cmd_reward_table(double sigma) {
  const auto table = reward::reward_table(sigma);
  std::string out = fmt::format("sigma = {}\n|s_hat - s|  accuracy_reward\n", sigma);
  for (const auto& row : table.at("rows")) {
    out += fmt::format("{:>11}  {:.6e}\n", row.at("difference").get<int>(),
                       row.at("accuracy_reward").get<double>());
  }
  return out;
}

}  // namespace speechjudge::pipeline
