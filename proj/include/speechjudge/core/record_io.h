#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "speechjudge/core/record.h"

namespace speechjudge {

nlohmann::json to_json(const StyleControlSpec& style);
StyleControlSpec style_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SpeechResponse& response);
SpeechResponse speech_response_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PreferenceRecord& record);
PreferenceRecord record_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Verdict& verdict);
Verdict verdict_from_json(const nlohmann::json& j);

/// One record per line, no trailing newline.
std::string encode_record(const PreferenceRecord& record);
PreferenceRecord decode_record(std::string_view line);

std::vector<PreferenceRecord> read_records(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames into place.
void write_records(const std::filesystem::path& path,
                   const std::vector<PreferenceRecord>& records);

/// Reads every non-empty line of a JSONL file.
std::vector<nlohmann::json> read_json_lines(const std::filesystem::path& path);
void write_json_lines(const std::filesystem::path& path,
                      const std::vector<nlohmann::json>& rows);

/// Atomic whole-file write (temp file + rename).
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace speechjudge
