#include "speechjudge/pipeline/progress.h"

#include <fstream>

#include "speechjudge/core/errors.h"

namespace speechjudge::pipeline {

ProgressLog::ProgressLog(std::filesystem::path path) : path_(std::move(path)) {}

std::map<std::string, nlohmann::json> ProgressLog::load() const {
  std::map<std::string, nlohmann::json> done;
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.contains("unit")) continue;
    done[j["unit"].get<std::string>()] = j["result"];
  }
  return done;
}

void ProgressLog::append(const std::string& unit_id, const nlohmann::json& result) {
  const auto line = nlohmann::json{{"unit", unit_id}, {"result", result}}.dump();
  std::lock_guard lock(mu_);
  std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::app);
  out << line << '\n';
  out.flush();
  if (!out) throw IoError("cannot append to " + path_.string());
}

void ProgressLog::clear() {
  std::lock_guard lock(mu_);
  std::filesystem::remove(path_);
}

}  // namespace speechjudge::pipeline
