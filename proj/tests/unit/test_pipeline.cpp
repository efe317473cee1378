#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "speechjudge/core/errors.h"
#include "speechjudge/core/record_io.h"
#include "speechjudge/core/validate.h"
#include "speechjudge/judge/simulated.h"
#include "speechjudge/pipeline/cache.h"
#include "speechjudge/pipeline/commands.h"
#include "speechjudge/pipeline/config.h"
#include "speechjudge/pipeline/export.h"
#include "speechjudge/pipeline/manifest.h"
#include "speechjudge/pipeline/parallel.h"
#include "speechjudge/pipeline/progress.h"
#include "test_support.h"

using namespace speechjudge;
using namespace speechjudge::pipeline;
namespace fs = std::filesystem;

namespace {

PipelineConfig toy_config(const fs::path& dataset_dir) {
  auto c = load_config(sjtest::fixtures_dir() / "toy_config.json");
  c.dataset_dir = dataset_dir;
  return c;
}

void build_toy(const PipelineConfig& c) {
  const auto services = make_build_services(c);
  cmd_build_semantic(c, services);
  cmd_build_acoustic(c, services);
}

}  // namespace

TEST(Cache, KeysSeparateKindsAndPayloads) {
  EXPECT_NE(cache_key("a", std::string_view("x")), cache_key("b", std::string_view("x")));
  EXPECT_NE(cache_key("a", std::string_view("x")), cache_key("a", std::string_view("y")));
  EXPECT_EQ(cache_key("a", nlohmann::json{{"k", 1}}), cache_key("a", std::string_view("{\"k\":1}")));
  EXPECT_EQ(cache_key("a", std::string_view("x")).size(), 64u);
}

TEST(Cache, PersistsAcrossInstances) {
  sjtest::TempDir dir;
  {
    CallCache c(dir.path());
    EXPECT_EQ(c.get_or_compute("k", [] { return std::string("v"); }), "v");
    EXPECT_EQ(c.misses(), 1u);
  }
  CallCache again(dir.path());
  EXPECT_EQ(again.get("k"), "v");
  EXPECT_EQ(again.get_or_compute("k", []() -> std::string { throw std::runtime_error("no"); }),
            "v");
}

TEST(Cache, ComputesOncePerKeyUnderContention) {
  CallCache c;
  std::atomic<int> calls{0};
  std::vector<std::thread> ts;
  for (int i = 0; i < 8; ++i) {
    ts.emplace_back([&] {
      c.get_or_compute("same", [&] {
        ++calls;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
        return std::string("x");
      });
    });
  }
  for (auto& t : ts) t.join();
  EXPECT_EQ(calls.load(), 1);
}

TEST(Cache, FailedComputationIsNotStored) {
  CallCache c;
  EXPECT_THROW(c.get_or_compute("k", []() -> std::string { throw TransportError("x"); }),
               TransportError);
  EXPECT_FALSE(c.get("k").has_value());
}

TEST(Progress, AppendLoadAndTornTail) {
  sjtest::TempDir dir;
  ProgressLog log(dir / "p.jsonl");
  log.append("a", {{"n", 1}});
  log.append("b", {{"n", 2}});
  { std::ofstream(dir / "p.jsonl", std::ios::app) << "{\"unit\":\"c\",\"res"; }
  const auto loaded = log.load();
  EXPECT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded.at("b")["n"], 2);
  log.clear();
  EXPECT_TRUE(log.load().empty());
}

TEST(Parallel, WritesBySlotAndPropagatesErrors) {
  std::vector<int> out(100, -1);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i * i));
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 5) throw DomainError("boom");
                            }),
               DomainError);
}

TEST(Config, ToyFixtureLoadsWithResolvedPaths) {
  const auto c = load_config(sjtest::fixtures_dir() / "toy_config.json");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.counts.total(), 10u);
  EXPECT_EQ(*c.semantic_corpus, sjtest::fixtures_dir() / "toy_corpus.jsonl");
  EXPECT_EQ(c.voice_roster.size(), 5u);
  EXPECT_EQ(c.judge.run_seeds.size(), 3u);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  nlohmann::json j{{"dataset_dir", "x"}, {"colour", "red"}};
  EXPECT_THROW(config_from_json(j), ConfigError);
  j = {{"dataset_dir", "x"}, {"judge", {{"temprature", 0.1}}}};
  EXPECT_THROW(config_from_json(j), ConfigError);
  j = {{"dataset_dir", "x"}, {"concurrency", 0}};
  EXPECT_THROW(config_from_json(j), ConfigError);
  j = {{"dataset_dir", "x"}, {"acoustic", {{"counts", {{"tts", {{"mixed", 1}}}}}}}};
  EXPECT_THROW(config_from_json(j), ConfigError);
  j = {{"dataset_dir", "x"}, {"judge", {{"client", "psychic"}}}};
  EXPECT_THROW(config_from_json(j), ConfigError);
  j = {{"seed", 1}};
  EXPECT_THROW(config_from_json(j), ConfigError);
  EXPECT_NO_THROW(config_from_json({{"dataset_dir", "x"}}));
}

TEST(Config, DefaultAcousticCounts) {
  const auto c = default_acoustic_counts();
  EXPECT_EQ(c.tts.at(pairs::StyleRequest::kEmotion), 1000u);
  EXPECT_EQ(c.implicit, 500u);
}

TEST(Manifest, JsonRoundTripAndVerify) {
  sjtest::TempDir dir;
  write_records(dir / "semantic.jsonl",
                {sjtest::make_semantic_record("a", ComparisonLabel::kWin)});
  Manifest m;
  m.dataset_name = "t";
  m.record_paths = {"semantic.jsonl"};
  recount(m, dir.path());
  EXPECT_EQ(m.record_count, 1u);
  EXPECT_EQ(m.counts_by_aspect.at("honesty"), 1u);
  write_manifest(m, dir.path());
  EXPECT_EQ(read_manifest(dir.path()), m);
  EXPECT_TRUE(verify_manifest(m, dir.path()).empty());
  m.record_count = 5;
  EXPECT_FALSE(verify_manifest(m, dir.path()).empty());
  m.record_paths.push_back("missing.jsonl");
  EXPECT_FALSE(verify_manifest(m, dir.path()).empty());
}

class ToyPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new sjtest::TempDir("sj-toy");
    build_toy(toy_config(dir_->path()));
  }
  static void TearDownTestSuite() { delete dir_; }
  static sjtest::TempDir* dir_;
  PipelineConfig config() const { return toy_config(dir_->path()); }
};
sjtest::TempDir* ToyPipeline::dir_ = nullptr;

TEST_F(ToyPipeline, ProducesValidRecordsAndManifest) {
  const auto m = read_manifest(dir_->path());
  EXPECT_TRUE(verify_manifest(m, dir_->path()).empty());
  EXPECT_EQ(m.counts_by_task_format.at("explicit_tts") +
                m.counts_by_task_format.at("explicit_dialogue") +
                m.counts_by_task_format.at("implicit_dialogue"),
            10u);
  EXPECT_GT(m.counts_by_task_format.at("semantic"), 0u);
  const auto c = config();
  for (const auto& r : load_dataset_records(dir_->path())) {
    EXPECT_TRUE(validate_record(r, c.voice_roster).empty()) << r.id;
    EXPECT_TRUE(fs::exists(dir_->path() / r.response_1.audio_ref));
  }
}

TEST_F(ToyPipeline, ScreensFrenchAndMathItems) {
  std::set<std::string> reasons_06, reasons_07;
  for (const auto& row : read_json_lines(dir_->path() / "filter_report.jsonl")) {
    const auto id = row["record_id"].get<std::string>();
    if (row["drop_reason"].is_null()) continue;
    if (id.starts_with("toy-06")) reasons_06.insert(row["drop_reason"].get<std::string>());
    if (id.starts_with("toy-07")) reasons_07.insert(row["drop_reason"].get<std::string>());
  }
  EXPECT_TRUE(reasons_06.contains("non_target_language"));
  EXPECT_TRUE(reasons_07.contains("math_or_code"));
  for (const auto& r : read_records(dir_->path() / "semantic.jsonl")) {
    EXPECT_FALSE(r.id.starts_with("toy-06"));
    EXPECT_FALSE(r.id.starts_with("toy-07"));
  }
}

TEST_F(ToyPipeline, RebuildIsIdempotent) {
  const auto before = read_file(dir_->path() / "semantic.jsonl");
  const auto c = config();
  cmd_build_semantic(c, make_build_services(c));
  EXPECT_EQ(read_file(dir_->path() / "semantic.jsonl"), before);
}

TEST_F(ToyPipeline, OracleJudgeIsPerfect) {
  auto c = config();
  c.both_orders = true;
  const auto records = load_dataset_records(c.dataset_dir);
  const auto out = cmd_judge(c, make_judge_clients(c, records));
  for (const auto& [aspect, m] : out.report.per_aspect) {
    EXPECT_EQ(m.accuracy, 1.0) << to_string(aspect);
    EXPECT_EQ(m.agreement, 1.0);
  }
  EXPECT_EQ(out.report.position_consistency, 1.0);
  EXPECT_EQ(out.per_run.size(), 3u);
  EXPECT_TRUE(fs::exists(out.verdicts_path));
  EXPECT_NE(cmd_report(c.dataset_dir, judge::Backend::kEndToEnd).find("100.00"),
            std::string::npos);
}

TEST_F(ToyPipeline, CascadedOracleIsPerfect) {
  auto c = config();
  c.backend = judge::Backend::kCascaded;
  c.aspects = {Aspect::helpfulness(), Aspect::truthfulness()};
  const auto records = load_dataset_records(c.dataset_dir);
  const auto out = cmd_judge(c, make_judge_clients(c, records));
  EXPECT_EQ(out.report.per_aspect.size(), 2u);
  for (const auto& [aspect, m] : out.report.per_aspect) EXPECT_EQ(m.accuracy, 1.0);
}

TEST_F(ToyPipeline, AlwaysOneMatchesWinFraction) {
  auto c = config();
  c.judge_client = "constant:<Answer>1</Answer>";
  c.both_orders = true;
  const auto records = load_dataset_records(c.dataset_dir);
  std::map<Aspect, std::pair<int, int>> wins;
  for (const auto& r : records) {
    for (const auto& [a, l] : r.labels) {
      wins[a].first += l == ComparisonLabel::kWin;
      wins[a].second += 1;
    }
  }
  const auto out = cmd_judge(c, make_judge_clients(c, records));
  for (const auto& [aspect, m] : out.report.per_aspect) {
    EXPECT_DOUBLE_EQ(m.accuracy,
                     static_cast<double>(wins[aspect].first) / wins[aspect].second);
  }
  EXPECT_EQ(out.report.position_consistency, 0.0);
}

TEST_F(ToyPipeline, TransportFailuresAreCountedAsInvalid) {
  auto c = config();
  c.judge.run_seeds = {7};
  c.aspects = {Aspect::honesty()};
  judge::ModelClients broken;
  broken.speech_judge = std::make_shared<judge::FunctionSpeechJudge>(
      [](const judge::SpeechJudgeRequest&) -> std::string { throw TransportError("down"); });
  const auto out = cmd_judge(c, broken, "broken");
  const auto& m = out.report.per_aspect.at(Aspect::honesty());
  EXPECT_EQ(m.invalid_rate, 1.0);
  EXPECT_EQ(out.report.transport_errors, m.n);
}

TEST_F(ToyPipeline, JudgeCacheIsScopedPerClient) {
  auto c = config();
  c.judge.run_seeds = {5};
  c.aspects = {Aspect::honesty()};
  judge::ModelClients one, two;
  one.speech_judge = std::make_shared<judge::ConstantSpeechJudge>("<Answer>1</Answer>");
  two.speech_judge = std::make_shared<judge::ConstantSpeechJudge>("<Answer>2</Answer>");
  const auto a = cmd_judge(c, one, "always-1");
  const auto b = cmd_judge(c, two, "always-2");
  EXPECT_NE(a.report.per_aspect.at(Aspect::honesty()).accuracy,
            b.report.per_aspect.at(Aspect::honesty()).accuracy);
}

TEST_F(ToyPipeline, StageOneExportIsSemanticOnly) {
  const auto c = config();
  const auto s = cmd_export_sft(c, 1);
  EXPECT_EQ(s.acoustic, 0u);
  const auto rows = read_json_lines(s.output);
  EXPECT_EQ(rows.size(), s.semantic);
  for (const auto& row : rows) {
    const auto t = training_record_from_json(row);
    EXPECT_TRUE(t.aspect.is_semantic());
    EXPECT_EQ(to_json(t), row);
    EXPECT_NE(t.target.find("<Answer>"), std::string::npos);
  }
  const auto m = manifest_from_json(
      nlohmann::json::parse(read_file(dir_->path() / "sft_stage1.manifest.json")));
  EXPECT_EQ(m.stage, "stage1_semantic");
  EXPECT_EQ(m.record_count, rows.size());
}

TEST_F(ToyPipeline, StageTwoMixesReplay) {
  auto c = config();
  c.replay_fraction = 0.5;
  const auto s = cmd_export_sft(c, 2);
  EXPECT_EQ(s.acoustic, 10u);
  EXPECT_EQ(s.semantic, 5u);
  std::size_t acoustic = 0;
  for (const auto& row : read_json_lines(s.output)) {
    acoustic += !training_record_from_json(row).aspect.is_semantic();
  }
  EXPECT_EQ(acoustic, 10u);
  EXPECT_THROW(cmd_export_sft(c, 3), ConfigError);
}

TEST(Export, TrainingTargetShape) {
  EXPECT_EQ(training_target(" Because. ", ComparisonLabel::kTie), "Because.\n<Answer>Tie</Answer>");
  EXPECT_THROW(training_target("  ", ComparisonLabel::kWin), DomainError);
  EXPECT_THROW(training_record_from_json({{"record_id", 1}}), IoError);
}

TEST(Export, PendingRationalesAreExcluded) {
  sjtest::TempDir dir;
  auto rec = sjtest::make_semantic_record("p", ComparisonLabel::kWin);
  rec.rationales[Aspect::honesty()] = "";
  rec.pending_rationales.insert(Aspect::honesty());
  write_records(dir / "semantic.jsonl", {rec});
  Manifest m;
  m.dataset_name = "p";
  m.record_paths = {"semantic.jsonl"};
  recount(m, dir.path());
  write_manifest(m, dir.path());
  PipelineConfig c;
  c.dataset_dir = dir.path();
  const auto s = cmd_export_sft(c, 1);
  EXPECT_EQ(s.semantic, 3u);
  ASSERT_EQ(s.pending.size(), 1u);
  EXPECT_EQ(s.pending[0], "p/honesty");
}

TEST(Commands, MathCorpusIsFullyScreened) {
  sjtest::TempDir dir;
  auto c = toy_config(dir.path());
  c.semantic_corpus = sjtest::fixtures_dir() / "math_corpus.jsonl";
  const auto m = cmd_build_semantic(c, make_build_services(c));
  EXPECT_EQ(m.counts_by_task_format.count("semantic"), 0u);
  for (const auto& row : read_json_lines(dir / "filter_report.jsonl")) {
    EXPECT_EQ(row["drop_reason"], "math_or_code");
  }
}

TEST(Commands, AcousticJobPlanFollowsCounts) {
  const auto c = toy_config("unused");
  const auto jobs = plan_acoustic_jobs(c);
  ASSERT_EQ(jobs.size(), 10u);
  std::set<std::string> ids;
  for (const auto& j : jobs) ids.insert(j.record_id);
  EXPECT_EQ(ids.size(), 10u);
  EXPECT_TRUE(ids.contains("tts-emotion-00001"));
  EXPECT_TRUE(ids.contains("dialogue-mixed-00001"));
  EXPECT_TRUE(ids.contains("implicit-emotion-00000"));
}

TEST(Commands, TransportFailureAbortsWithCheckpoint) {
  sjtest::TempDir dir;
  auto c = toy_config(dir.path());
  auto services = make_build_services(c);
  std::atomic<int> calls{0};
  auto real = services.clients.synthesizer;
  services.clients.synthesizer = std::make_shared<judge::FunctionSynthesizer>(
      [&, real](const judge::SynthesisRequest& r) {
        if (++calls > 12) throw TransportError("tts down");
        return real->synthesize(r);
      });
  c.concurrency = 1;
  EXPECT_THROW(cmd_build_semantic(c, services), TransportError);
  // Resuming with a healthy synthesizer finishes and matches a clean build.
  cmd_build_semantic(c, make_build_services(c));
  sjtest::TempDir clean;
  auto c2 = toy_config(clean.path());
  cmd_build_semantic(c2, make_build_services(c2));
  EXPECT_EQ(read_file(dir / "semantic.jsonl"), read_file(clean / "semantic.jsonl"));
}

TEST(Commands, RewardTable) {
  const auto t = cmd_reward_table(1.0);
  EXPECT_NE(t.find("3.354626e-04"), std::string::npos);
}
