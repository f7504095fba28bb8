#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

namespace reval {

// One step in a run's evaluation history. Timestamps are logical (a
// monotonically increasing counter per run), which keeps repeated runs
// byte-identical; wall time lives in the run summary instead.
struct AuditEvent {
  std::int64_t timestamp = 0;
  std::string run_id;
  std::string record_id;
  std::string stage;    // e.g. "scorer.prompt", "critic.completion"
  std::string payload;  // prompt text, completion text, parsed object, decision
  std::string manifest_hash;

  bool operator==(const AuditEvent&) const = default;
};

std::string audit_event_to_json(const AuditEvent& event);
AuditEvent audit_event_from_json(const std::string& line);

// In-memory collector for one record's (or one operation's) events. Local
// timestamps are 0..n-1; the writer reassigns the run-global order on append,
// so concurrent workers still produce a deterministic file.
class AuditTrail {
 public:
  AuditTrail(std::string run_id, std::string manifest_hash, std::string record_id = "");

  void add(const std::string& stage, const std::string& payload);
  const std::vector<AuditEvent>& events() const { return events_; }
  std::size_t count(const std::string& stage_suffix) const;

 private:
  std::string run_id_;
  std::string manifest_hash_;
  std::string record_id_;
  std::vector<AuditEvent> events_;
};

// Append-only line-delimited event file for one run; the manifest is embedded
// as the first line. Appends are serialized and flushed per batch.
class AuditWriter {
 public:
  AuditWriter(std::string path, const std::string& manifest_json_line);

  void append(const std::vector<AuditEvent>& events);
  std::int64_t events_written() const;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::int64_t next_timestamp_ = 0;
  mutable std::mutex mutex_;
};

struct AuditFile {
  std::string manifest_line;
  std::vector<AuditEvent> events;
};

AuditFile read_audit_file(const std::string& path);

}  // namespace reval
