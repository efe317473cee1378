#include "speechjudge/core/record_io.h"

#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "speechjudge/core/errors.h"

namespace speechjudge {

using nlohmann::json;

namespace {

template <typename T>
json optional_to_json(const std::optional<T>& value) {
  if (!value) return nullptr;
  return *value;
}

template <typename T>
std::optional<T> optional_from_json(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

json to_json(const StyleControlSpec& style) {
  return json{{"category", to_string(style.category)},
              {"target_label", style.target_label},
              {"mixed_flag", style.mixed},
              {"gender_label", optional_to_json(style.gender_label)}};
}

StyleControlSpec style_from_json(const json& j) {
  StyleControlSpec s;
  s.category = parse_style_category(j.at("category").get<std::string>());
  s.target_label = j.at("target_label").get<std::string>();
  s.mixed = j.value("mixed_flag", false);
  s.gender_label = optional_from_json<std::string>(j, "gender_label");
  return s;
}

json to_json(const SpeechResponse& r) {
  return json{{"audio_ref", r.audio_ref},
              {"source_text", r.source_text},
              {"tts_model_id", r.tts_model_id},
              {"style", r.style ? to_json(*r.style) : json(nullptr)},
              {"duration_s", r.duration_s},
              {"transcript", optional_to_json(r.transcript)},
              {"wer", optional_to_json(r.wer)},
              {"token_estimate", r.token_estimate},
              {"filtered", r.filtered}};
}

SpeechResponse speech_response_from_json(const json& j) {
  SpeechResponse r;
  r.audio_ref = j.at("audio_ref").get<std::string>();
  r.source_text = j.at("source_text").get<std::string>();
  r.tts_model_id = j.value("tts_model_id", "");
  if (auto it = j.find("style"); it != j.end() && !it->is_null()) {
    r.style = style_from_json(*it);
  }
  r.duration_s = j.at("duration_s").get<double>();
  r.transcript = optional_from_json<std::string>(j, "transcript");
  r.wer = optional_from_json<double>(j, "wer");
  r.token_estimate = j.value("token_estimate", std::int64_t{0});
  r.filtered = j.value("filtered", false);
  return r;
}

json to_json(const PreferenceRecord& record) {
  json labels = json::object();
  for (const auto& [aspect, label] : record.labels) {
    labels[to_string(aspect)] = to_string(label);
  }
  json rationales = json::object();
  for (const auto& [aspect, text] : record.rationales) {
    rationales[to_string(aspect)] = text;
  }
  json pending = json::array();
  for (const auto& aspect : record.pending_rationales) {
    pending.push_back(to_string(aspect));
  }
  json provenance{{"seed_dataset", record.provenance.seed_dataset},
                  {"rng_seed", record.provenance.rng_seed},
                  {"generator_versions", record.provenance.generator_versions}};
  return json{{"id", record.id},
              {"task_format", to_string(record.task_format)},
              {"instruction", record.instruction},
              {"response_1", to_json(record.response_1)},
              {"response_2", to_json(record.response_2)},
              {"labels", std::move(labels)},
              {"rationales", std::move(rationales)},
              {"pending_rationales", std::move(pending)},
              {"provenance", std::move(provenance)}};
}

PreferenceRecord record_from_json(const json& j) {
  PreferenceRecord r;
  r.id = j.at("id").get<std::string>();
  r.task_format = parse_task_format(j.at("task_format").get<std::string>());
  r.instruction = j.at("instruction").get<std::string>();
  r.response_1 = speech_response_from_json(j.at("response_1"));
  r.response_2 = speech_response_from_json(j.at("response_2"));
  for (const auto& [key, value] : j.at("labels").items()) {
    r.labels.emplace(parse_aspect(key), parse_label(value.get<std::string>()));
  }
  for (const auto& [key, value] : j.at("rationales").items()) {
    r.rationales.emplace(parse_aspect(key), value.get<std::string>());
  }
  if (auto it = j.find("pending_rationales"); it != j.end()) {
    for (const auto& value : *it) {
      r.pending_rationales.insert(parse_aspect(value.get<std::string>()));
    }
  }
  const auto& p = j.at("provenance");
  r.provenance.seed_dataset = p.value("seed_dataset", "");
  r.provenance.rng_seed = p.value("rng_seed", std::uint64_t{0});
  if (auto it = p.find("generator_versions"); it != p.end()) {
    r.provenance.generator_versions =
        it->get<std::map<std::string, std::string>>();
  }
  return r;
}

json to_json(const Verdict& v) {
  return json{{"aspect", to_string(v.aspect)},
              {"label", v.label ? json(to_string(*v.label)) : json("invalid")},
              {"rationale", v.rationale},
              {"raw_completion", v.raw_completion},
              {"order_swapped", v.order_swapped},
              {"run_seed", v.run_seed},
              {"truncated", v.truncated}};
}

Verdict verdict_from_json(const json& j) {
  Verdict v;
  v.aspect = parse_aspect(j.at("aspect").get<std::string>());
  const auto label = j.at("label").get<std::string>();
  if (label != "invalid") v.label = parse_label(label);
  v.rationale = j.value("rationale", "");
  v.raw_completion = j.value("raw_completion", "");
  v.order_swapped = j.value("order_swapped", false);
  v.run_seed = j.value("run_seed", std::uint64_t{0});
  v.truncated = j.value("truncated", false);
  return v;
}

std::string encode_record(const PreferenceRecord& record) {
  return to_json(record).dump();
}

PreferenceRecord decode_record(std::string_view line) {
  try {
    return record_from_json(json::parse(line));
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed record line: ") + e.what());
  }
}

std::vector<json> read_json_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<json> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": " +
                    e.what());
    }
  }
  return rows;
}

void write_json_lines(const std::filesystem::path& path,
                      const std::vector<json>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump();
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<PreferenceRecord> read_records(const std::filesystem::path& path) {
  std::vector<PreferenceRecord> records;
  for (const auto& row : read_json_lines(path)) {
    records.push_back(record_from_json(row));
  }
  return records;
}

void write_records(const std::filesystem::path& path,
                   const std::vector<PreferenceRecord>& records) {
  std::string out;
  for (const auto& record : records) {
    out += encode_record(record);
    out += '\n';
  }
  write_file_atomic(path, out);
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ostringstream suffix;
  suffix << ".tmp." << ::getpid() << '.'
         << std::hash<std::thread::id>{}(std::this_thread::get_id());
  auto tmp = path;
  tmp += suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace speechjudge
