#include "reval/audit.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reval/error.hpp"

namespace reval {

namespace {
using nlohmann::json;
}

std::string audit_event_to_json(const AuditEvent& event) {
  json j;
  j["timestamp"] = event.timestamp;
  j["run_id"] = event.run_id;
  j["record_id"] = event.record_id;
  j["stage"] = event.stage;
  j["payload"] = event.payload;
  j["manifest_hash"] = event.manifest_hash;
  return j.dump();
}

AuditEvent audit_event_from_json(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("bad audit event JSON: ") + e.what());
  }
  AuditEvent event;
  event.timestamp = j.at("timestamp").get<std::int64_t>();
  event.run_id = j.at("run_id").get<std::string>();
  event.record_id = j.at("record_id").get<std::string>();
  event.stage = j.at("stage").get<std::string>();
  event.payload = j.at("payload").get<std::string>();
  event.manifest_hash = j.at("manifest_hash").get<std::string>();
  return event;
}

AuditTrail::AuditTrail(std::string run_id, std::string manifest_hash, std::string record_id)
    : run_id_(std::move(run_id)),
      manifest_hash_(std::move(manifest_hash)),
      record_id_(std::move(record_id)) {}

void AuditTrail::add(const std::string& stage, const std::string& payload) {
  AuditEvent event;
  event.timestamp = static_cast<std::int64_t>(events_.size());
  event.run_id = run_id_;
  event.record_id = record_id_;
  event.stage = stage;
  event.payload = payload;
  event.manifest_hash = manifest_hash_;
  events_.push_back(std::move(event));
}

std::size_t AuditTrail::count(const std::string& stage_suffix) const {
  std::size_t n = 0;
  for (const auto& e : events_) {
    if (e.stage.size() >= stage_suffix.size() &&
        e.stage.compare(e.stage.size() - stage_suffix.size(), stage_suffix.size(),
                        stage_suffix) == 0)
      ++n;
  }
  return n;
}

AuditWriter::AuditWriter(std::string path, const std::string& manifest_json_line)
    : path_(std::move(path)) {
  std::ofstream out(path_, std::ios::binary);  // truncate: one file per run
  if (!out) throw Error(ErrorCode::IoError, "cannot open audit file: " + path_);
  out << manifest_json_line << "\n";
  if (!out) throw Error(ErrorCode::IoError, "failed writing audit file: " + path_);
}

void AuditWriter::append(const std::vector<AuditEvent>& events) {
  std::lock_guard<std::mutex> lock(mutex_);
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::IoError, "cannot append to audit file: " + path_);
  for (AuditEvent event : events) {
    event.timestamp = next_timestamp_++;
    out << audit_event_to_json(event) << "\n";
  }
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "failed appending to audit file: " + path_);
}

std::int64_t AuditWriter::events_written() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return next_timestamp_;
}

AuditFile read_audit_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read audit file: " + path);
  AuditFile file;
  if (!std::getline(in, file.manifest_line))
    throw Error(ErrorCode::FormatError, "audit file is empty: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    file.events.push_back(audit_event_from_json(line));
  }
  return file;
}

}  // namespace reval
