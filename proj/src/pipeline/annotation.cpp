#include "speechjudge/pipeline/annotation.h"

#include <fstream>
#include <mutex>

#include <fmt/format.h>
#include <httplib.h>

#include "speechjudge/core/errors.h"
#include "speechjudge/core/record_io.h"
#include "speechjudge/core/rng.h"
#include "speechjudge/metrics/metrics.h"

namespace speechjudge::pipeline {

nlohmann::json to_json(const Annotation& a) {
  nlohmann::json j{{"annotator_id", a.annotator_id},
                   {"record_id", a.record_id},
                   {"aspect", to_string(a.aspect)},
                   {"label", to_string(a.label)}};
  j["rationale_consistent"] =
      a.rationale_consistent ? nlohmann::json(*a.rationale_consistent) : nlohmann::json();
  return j;
}

Annotation annotation_from_json(const nlohmann::json& j) {
  try {
    Annotation a;
    a.annotator_id = j.at("annotator_id").get<std::string>();
    a.record_id = j.at("record_id").get<std::string>();
    a.aspect = parse_aspect(j.at("aspect").get<std::string>());
    a.label = parse_label(j.at("label").get<std::string>());
    if (j.contains("rationale_consistent") && !j.at("rationale_consistent").is_null()) {
      a.rationale_consistent = j.at("rationale_consistent").get<bool>();
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("malformed annotation: {}", e.what()));
  }
}

AnnotationStore::AnnotationStore(std::filesystem::path path) : path_(std::move(path)) {
  if (!std::filesystem::exists(path_)) return;
  for (const auto& j : read_json_lines(path_)) {
    auto a = annotation_from_json(j);
    latest_[{a.annotator_id, a.record_id, a.aspect}] = std::move(a);
  }
}

void AnnotationStore::upsert(const std::vector<Annotation>& annotations) {
  std::unique_lock lock(mu_);
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::app);
  for (const auto& a : annotations) out << to_json(a).dump() << '\n';
  out.flush();
  if (!out) throw IoError("cannot append to " + path_.string());
  for (const auto& a : annotations) latest_[{a.annotator_id, a.record_id, a.aspect}] = a;
}

std::vector<Annotation> AnnotationStore::all() const {
  std::shared_lock lock(mu_);
  std::vector<Annotation> out;
  out.reserve(latest_.size());
  for (const auto& [k, a] : latest_) out.push_back(a);
  return out;
}

bool AnnotationStore::has(std::string_view annotator, std::string_view record,
                          Aspect aspect) const {
  std::shared_lock lock(mu_);
  return latest_.contains({std::string(annotator), std::string(record), aspect});
}

ModelLabels load_model_labels(const std::filesystem::path& verdicts_path) {
  ModelLabels out;
  std::optional<std::uint64_t> seed;
  for (const auto& line : read_json_lines(verdicts_path)) {
    const auto v = verdict_from_json(line.at("forward"));
    if (!seed) seed = v.run_seed;
    if (v.run_seed != *seed) continue;
    out[{line.at("record_id").get<std::string>(), v.aspect}] = v.label;
  }
  return out;
}

AnnotationService::AnnotationService(std::vector<PreferenceRecord> records, ModelLabels model,
                                     AnnotationStore& store, std::uint64_t seed)
    : records_(std::move(records)), model_(std::move(model)), store_(store), seed_(seed) {}

const PreferenceRecord* AnnotationService::find(std::string_view id) const {
  for (const auto& r : records_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

FacadeReply AnnotationService::next_pair(std::string_view annotator) const {
  if (annotator.empty()) return {400, {{"error", "annotator is required"}}};
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    bool complete = true;
    for (const auto& [aspect, label] : r.labels) {
      complete = complete && store_.has(annotator, r.id, aspect);
    }
    if (complete) continue;

    nlohmann::json aspects = nlohmann::json::array();
    for (const auto& [aspect, label] : r.labels) {
      aspects.push_back({{"id", to_string(aspect)}, {"name", aspect_prompt_name(aspect)}});
    }
    // Per-annotator display order, so human position bias can be measured.
    Rng rng = make_rng(seed_, fmt::format("display/{}/{}", annotator, r.id));
    const bool swap = fair_coin(rng);
    return {200,
            {{"done", false},
             {"cursor", i},
             {"total", records_.size()},
             {"record_id", r.id},
             {"task_format", to_string(r.task_format)},
             {"instruction", r.instruction},
             {"audio", {"/" + r.response_1.audio_ref, "/" + r.response_2.audio_ref}},
             {"display_order", swap ? nlohmann::json{2, 1} : nlohmann::json{1, 2}},
             {"aspects", aspects}}};
  }
  return {200,
          {{"done", true},
           {"cursor", records_.size()},
           {"total", records_.size()},
           {"summary", agreement_summary(std::string(annotator)).body}}};
}

FacadeReply AnnotationService::submit(const nlohmann::json& body) {
  if (!body.is_object()) return {400, {{"error", "body must be a JSON object"}}};
  std::vector<std::string> missing;
  for (const char* field : {"annotator_id", "record_id", "labels"}) {
    if (!body.contains(field)) missing.emplace_back(field);
  }
  if (!missing.empty()) return {400, {{"error", "missing fields"}, {"missing", missing}}};
  if (!body["annotator_id"].is_string() || !body["record_id"].is_string() ||
      !body["labels"].is_object()) {
    return {400, {{"error", "annotator_id and record_id must be strings, labels an object"}}};
  }
  const auto annotator = body["annotator_id"].get<std::string>();
  const auto record_id = body["record_id"].get<std::string>();
  const auto* record = find(record_id);
  if (!record) return {404, {{"error", fmt::format("unknown record '{}'", record_id)}}};

  std::vector<Annotation> batch;
  std::vector<std::string> invalid;
  const auto& labels = body["labels"];
  const nlohmann::json flags = body.value("rationale_flags", nlohmann::json::object());
  for (const auto& [aspect, truth] : record->labels) {
    const auto name = to_string(aspect);
    if (!labels.contains(name)) {
      missing.push_back("labels." + name);
      continue;
    }
    try {
      Annotation a{annotator, record_id, aspect,
                   parse_label(labels[name].get<std::string>()), std::nullopt};
      if (flags.contains(name) && flags[name].is_boolean()) {
        a.rationale_consistent = flags[name].get<bool>();
      }
      batch.push_back(std::move(a));
    } catch (const std::exception&) {
      invalid.push_back("labels." + name);
    }
  }
  for (const auto& [name, value] : labels.items()) {
    bool presented = false;
    for (const auto& [aspect, truth] : record->labels) presented = presented || to_string(aspect) == name;
    if (!presented) invalid.push_back("labels." + name);
  }
  if (!missing.empty() || !invalid.empty()) {
    return {400, {{"error", "labels must cover exactly the presented aspects"},
                  {"missing", missing},
                  {"invalid", invalid}}};
  }
  store_.upsert(batch);
  return {200, {{"stored", batch.size()}, {"agreement", agreement_summary(annotator).body}}};
}

FacadeReply AnnotationService::agreement_summary(std::optional<std::string> annotator) const {
  std::map<Aspect, std::pair<std::vector<VerdictLabel>, std::vector<ComparisonLabel>>> by_aspect;
  std::size_t annotations = 0;
  std::size_t flagged = 0;
  std::size_t supported = 0;
  for (const auto& a : store_.all()) {
    if (annotator && a.annotator_id != *annotator) continue;
    ++annotations;
    if (a.rationale_consistent) {
      ++flagged;
      supported += *a.rationale_consistent ? 1 : 0;
    }
    const auto it = model_.find({a.record_id, a.aspect});
    if (it == model_.end()) continue;
    by_aspect[a.aspect].first.push_back(it->second);
    by_aspect[a.aspect].second.push_back(a.label);
  }

  nlohmann::json per_aspect = nlohmann::json::object();
  std::vector<VerdictLabel> all_model;
  std::vector<ComparisonLabel> all_human;
  for (const auto& [aspect, lists] : by_aspect) {
    const auto& [model, human] = lists;
    per_aspect[to_string(aspect)] = {{"n", human.size()},
                                     {"agreement", metrics::agreement(model, human)},
                                     {"accuracy", metrics::accuracy(model, human)}};
    all_model.insert(all_model.end(), model.begin(), model.end());
    all_human.insert(all_human.end(), human.begin(), human.end());
  }
  nlohmann::json overall{{"n", all_human.size()}};
  overall["agreement"] =
      all_human.empty() ? nlohmann::json() : nlohmann::json(metrics::agreement(all_model, all_human));
  nlohmann::json body{{"annotations", annotations},
                      {"per_aspect", per_aspect},
                      {"overall", overall}};
  body["rationale_consistency"] =
      flagged == 0 ? nlohmann::json()
                   : nlohmann::json(static_cast<double>(supported) / static_cast<double>(flagged));
  if (annotator) body["annotator_id"] = *annotator;
  return {200, body};
}

struct AnnotationServer::Impl {
  httplib::Server server;
};

AnnotationServer::AnnotationServer(AnnotationService& service,
                                   const std::filesystem::path& dataset_dir)
    : impl_(std::make_unique<Impl>()) {
  auto& s = impl_->server;
  auto reply = [](httplib::Response& res, const FacadeReply& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  s.Get("/api/next-pair", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.next_pair(req.get_param_value("annotator")));
  });
  s.Post("/api/annotation", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded()) {
      reply(res, {400, {{"error", "body is not JSON"}}});
      return;
    }
    reply(res, service.submit(body));
  });
  s.Get("/api/agreement-summary",
        [&service, reply](const httplib::Request& req, httplib::Response& res) {
          std::optional<std::string> who;
          if (req.has_param("annotator")) who = req.get_param_value("annotator");
          reply(res, service.agreement_summary(who));
        });
  const auto audio = dataset_dir / "audio";
  std::filesystem::create_directories(audio);
  s.set_mount_point("/audio", audio.string());
  s.set_file_extension_and_mimetype_mapping("wav", "audio/wav");
  s.set_file_extension_and_mimetype_mapping("json", "application/json");
}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  if (!impl_->server.bind_to_port(host, port)) {
    throw IoError(fmt::format("cannot bind {}:{}", host, port));
  }
  return port;
}

void AnnotationServer::run() { impl_->server.listen_after_bind(); }

void AnnotationServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace speechjudge::pipeline
