#include "speechjudge/pipeline/config.h"

#include <set>

#include <fmt/format.h>

#include "speechjudge/core/errors.h"
#include "speechjudge/core/record_io.h"
#include "speechjudge/judge/guard.h"
#include "speechjudge/judge/http_clients.h"
#include "speechjudge/judge/simulated.h"

namespace speechjudge::pipeline {

std::size_t AcousticCounts::total() const {
  std::size_t n = implicit;
  for (const auto& [r, c] : tts) n += c;
  for (const auto& [r, c] : dialogue) n += c;
  return n;
}

AcousticCounts default_acoustic_counts() {
  using pairs::StyleRequest;
  AcousticCounts c;
  c.tts = {{StyleRequest::kEmotion, 1000}, {StyleRequest::kGender, 1000}, {StyleRequest::kVoice, 1000}};
  c.dialogue = {{StyleRequest::kEmotion, 1000},
                {StyleRequest::kGender, 1000},
                {StyleRequest::kVoice, 1000},
                {StyleRequest::kMixed, 180}};
  c.implicit = 500;
  return c;
}

void PipelineConfig::validate() const {
  if (dataset_dir.empty()) throw ConfigError("dataset_dir is required");
  if (concurrency < 1) throw ConfigError("concurrency must be at least 1");
  if (clients != "simulated" && clients != "http") {
    throw ConfigError(fmt::format("clients must be simulated or http, not '{}'", clients));
  }
  if (max_tokens <= 0) throw ConfigError("max_tokens must be positive");
  if (speech_tokens_per_second < 0.0) throw ConfigError("speech_tokens_per_second is negative");
  if (max_pairs_per_instruction == 0) throw ConfigError("max_pairs_per_instruction must be positive");
  if (replay_fraction < 0.0) throw ConfigError("replay_fraction is negative");
  if (counts.tts.contains(pairs::StyleRequest::kMixed)) {
    throw ConfigError("mixed requests are dialogue-only");
  }
  judge.validate();
  if (length_bucket_edges) {
    for (std::size_t i = 1; i < length_bucket_edges->size(); ++i) {
      if (!((*length_bucket_edges)[i - 1] < (*length_bucket_edges)[i])) {
        throw ConfigError("length_bucket_edges must be strictly increasing");
      }
    }
  }
  if (judge_client != "oracle" && judge_client != "http" &&
      !judge_client.starts_with("constant:")) {
    throw ConfigError(fmt::format("unknown judge_client '{}'", judge_client));
  }
}

namespace {

void reject_unknown(const nlohmann::json& j, std::string_view where,
                    std::initializer_list<std::string_view> known) {
  const std::set<std::string_view> allowed(known);
  for (const auto& [k, v] : j.items()) {
    if (!allowed.contains(k)) throw ConfigError(fmt::format("unknown key '{}' in {}", k, where));
  }
}

std::map<pairs::StyleRequest, std::size_t> counts_map(const nlohmann::json& j) {
  std::map<pairs::StyleRequest, std::size_t> out;
  for (const auto& [k, v] : j.items()) out[pairs::parse_style_request(k)] = v.get<std::size_t>();
  return out;
}

}  // namespace

PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  reject_unknown(j, "config",
                 {"dataset_dir", "dataset_name", "split", "seed", "concurrency", "clients",
                  "audit_log", "target_language", "max_tokens", "speech_tokens_per_second",
                  "tts_model_id", "semantic", "acoustic", "judge", "export"});
  auto path = [&](const nlohmann::json& v) {
    std::filesystem::path p = v.get<std::string>();
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  };
  auto opt_path = [&](const nlohmann::json& obj, const char* key,
                      std::optional<std::filesystem::path>& out) {
    if (obj.contains(key)) out = path(obj.at(key));
  };

  PipelineConfig c;
  try {
    c.dataset_dir = path(j.at("dataset_dir"));
    c.dataset_name = j.value("dataset_name", c.dataset_name);
    c.split = j.value("split", c.split);
    c.seed = j.value("seed", c.seed);
    c.concurrency = j.value("concurrency", c.concurrency);
    c.clients = j.value("clients", c.clients);
    opt_path(j, "audit_log", c.audit_log);
    c.target_language = j.value("target_language", c.target_language);
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.speech_tokens_per_second = j.value("speech_tokens_per_second", c.speech_tokens_per_second);
    c.tts_model_id = j.value("tts_model_id", c.tts_model_id);

    if (j.contains("semantic")) {
      const auto& s = j.at("semantic");
      reject_unknown(s, "semantic", {"corpus", "max_pairs_per_instruction"});
      opt_path(s, "corpus", c.semantic_corpus);
      c.max_pairs_per_instruction = s.value("max_pairs_per_instruction", c.max_pairs_per_instruction);
    }
    if (j.contains("acoustic")) {
      const auto& a = j.at("acoustic");
      reject_unknown(a, "acoustic",
                     {"tts_seeds", "dialogue_seeds", "implicit_seeds", "template_dir",
                      "voice_roster", "counts"});
      opt_path(a, "tts_seeds", c.tts_seeds);
      opt_path(a, "dialogue_seeds", c.dialogue_seeds);
      opt_path(a, "implicit_seeds", c.implicit_seeds);
      opt_path(a, "template_dir", c.template_dir);
      c.voice_roster = a.value("voice_roster", c.voice_roster);
      if (a.contains("counts")) {
        const auto& n = a.at("counts");
        reject_unknown(n, "acoustic.counts", {"tts", "dialogue", "implicit"});
        c.counts = AcousticCounts{};
        if (n.contains("tts")) c.counts.tts = counts_map(n.at("tts"));
        if (n.contains("dialogue")) c.counts.dialogue = counts_map(n.at("dialogue"));
        c.counts.implicit = n.value("implicit", std::size_t{0});
      }
    }
    if (j.contains("judge")) {
      const auto& g = j.at("judge");
      reject_unknown(g, "judge",
                     {"backend", "aspects", "run_seeds", "both_orders", "max_pair_audio_s",
                      "temperature", "top_p", "top_k", "repetition_penalty", "prompt_mode",
                      "client", "length_bucket_edges"});
      if (g.contains("backend")) c.backend = judge::parse_backend(g.at("backend").get<std::string>());
      for (const auto& a : g.value("aspects", std::vector<std::string>{})) {
        c.aspects.push_back(parse_aspect(a));
      }
      c.judge.run_seeds = g.value("run_seeds", c.judge.run_seeds);
      c.both_orders = g.value("both_orders", c.both_orders);
      c.judge.max_pair_audio_s = g.value("max_pair_audio_s", c.judge.max_pair_audio_s);
      c.judge.sampling.temperature = g.value("temperature", c.judge.sampling.temperature);
      c.judge.sampling.top_p = g.value("top_p", c.judge.sampling.top_p);
      c.judge.sampling.top_k = g.value("top_k", c.judge.sampling.top_k);
      c.judge.sampling.repetition_penalty =
          g.value("repetition_penalty", c.judge.sampling.repetition_penalty);
      const auto mode = g.value("prompt_mode", std::string("trained"));
      if (mode != "trained" && mode != "baseline") {
        throw ConfigError(fmt::format("prompt_mode must be trained or baseline, not '{}'", mode));
      }
      c.judge.prompt_mode =
          mode == "trained" ? judge::PromptMode::kTrained : judge::PromptMode::kBaseline;
      c.judge_client = g.value("client", c.judge_client);
      if (g.contains("length_bucket_edges")) {
        c.length_bucket_edges = g.at("length_bucket_edges").get<std::vector<double>>();
      }
    }
    if (j.contains("export")) {
      const auto& e = j.at("export");
      reject_unknown(e, "export", {"replay_fraction"});
      c.replay_fraction = e.value("replay_fraction", c.replay_fraction);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("bad config: {}", e.what()));
  }
  c.validate();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("{} is not valid JSON: {}", path.string(), e.what()));
  }
  return config_from_json(j, path.parent_path());
}

namespace {

std::shared_ptr<judge::AuditLog> audit_for(const PipelineConfig& config) {
  return config.audit_log ? std::make_shared<judge::AuditLog>(*config.audit_log) : nullptr;
}

}  // namespace

Services make_build_services(const PipelineConfig& config) {
  Services s;
  if (config.clients == "simulated") {
    s.clients.synthesizer = std::make_shared<judge::SimulatedSynthesizer>(config.dataset_dir);
    s.clients.transcriber = std::make_shared<judge::SimulatedTranscriber>(config.dataset_dir);
    s.clients.chatter = std::make_shared<judge::SimulatedChat>();
    s.detector = std::make_shared<judge::SimulatedLanguageDetector>();
    return s;
  }
  const auto audit = audit_for(config);
  s.clients = judge::guard_clients(judge::http_clients_from_env(config.dataset_dir, audit),
                                   config.concurrency);
  s.detector = std::make_shared<judge::HttpLanguageDetector>(
      judge::endpoint_from_env("SPEECHJUDGE_LANGID"), audit);
  return s;
}

judge::ModelClients make_judge_clients(const PipelineConfig& config,
                                       std::span<const PreferenceRecord> records) {
  judge::ModelClients c;
  if (config.judge_client == "http") {
    return judge::guard_clients(
        judge::http_clients_from_env(config.dataset_dir, audit_for(config)), config.concurrency);
  }
  c.transcriber = std::make_shared<judge::SimulatedTranscriber>(config.dataset_dir);
  if (config.judge_client == "oracle") {
    c.speech_judge =
        std::make_shared<judge::OracleSpeechJudge>(records, config.judge.prompt_mode);
    c.chatter = std::make_shared<judge::OracleTextJudge>(records, config.judge.prompt_mode);
  } else {
    const auto completion = config.judge_client.substr(std::string_view("constant:").size());
    c.speech_judge = std::make_shared<judge::ConstantSpeechJudge>(completion);
    c.chatter = std::make_shared<judge::FunctionChat>(
        [completion](const judge::ChatRequest&) { return completion; });
  }
  return c;
}

}  // namespace speechjudge::pipeline
