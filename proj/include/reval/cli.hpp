#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace reval::cli {

// Exit code contract (stable for CI): 0 success, 1 operational error,
// 2 anomaly flags.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAnomalies = 2;

// Unix seconds; honors REVAL_FIXED_TIME for reproducible runs.
std::int64_t wall_clock_seconds();

struct GenerateRubricArgs {
  std::string config_path;
  std::string task_path;
  std::string out_path;
  std::string audit_path;  // default: out_path + ".audit.jsonl"
  std::string run_id = "rubric-gen";
  std::string domain_note_path;  // optional; overrides the template default
  std::optional<std::int64_t> seed;
};
int cmd_generate_rubric(const GenerateRubricArgs& args, std::ostream& out, std::ostream& err);

struct ReviewArgs {
  std::string rubric_path;
  bool approve = false;
  bool reject = false;
  std::string edits_path;  // JSON array of edits
  std::string out_path;    // default: rewrite rubric_path
};
int cmd_review(const ReviewArgs& args, std::ostream& out, std::ostream& err);

struct ScoreArgs {
  std::string config_path;
  std::string rubric_path;
  std::string records_path;  // dataset-shaped TSV
  std::string out_dir;
  std::string run_id;
  std::string mode = "SC";
  std::optional<int> max_iters;  // overrides config
  std::optional<std::int64_t> seed;
  int workers = 1;
  std::size_t limit = 0;  // 0 = all records
};
int cmd_score(const ScoreArgs& args, std::ostream& out, std::ostream& err);

struct EvaluateArgs {
  std::string dataset_path;
  std::vector<std::string> score_files;  // LABEL=path
  std::string out_dir;
  std::size_t first_n = 0;  // 0 = all set-8 records
  bool strict = false;
};
int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err);

struct TrackArgs {
  std::string baseline_dir;
  std::string report_path;
  std::string thresholds_path;
};
int cmd_track(const TrackArgs& args, std::ostream& out, std::ostream& err);

struct KbArgs {
  std::string action;  // list | approve | add | stats
  std::string store_path;
  std::string kind;  // for add on a new store
  std::string id;    // approve
  std::string entry_path;  // add: JSON entry file
  std::string query;       // list: diagnostic retrieval
  std::size_t k = 3;
  std::size_t dim = 64;
  std::int64_t seed = 0;  // mock embedder used for add/query
};
int cmd_kb(const KbArgs& args, std::ostream& out, std::ostream& err);

}  // namespace reval::cli
