#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reval/rubric.hpp"

namespace reval {

// The six essay traits, each scored 1..6. Order follows the trait columns of
// the public distribution: ideas and content, organization, voice, word
// choice, sentence fluency, conventions.
struct TraitScores {
  int ideas_content = 0;
  int organization = 0;
  int voice = 0;
  int word_choice = 0;
  int sentence_fluency = 0;
  int conventions = 0;

  bool operator==(const TraitScores&) const = default;
  int trait(std::size_t index) const;  // 0..5 in the order above
};

inline constexpr const char* kTraitLabels[6] = {"I&C", "Org", "Voice", "WC", "SF", "Conv"};
inline constexpr const char* kTraitCriterionNames[6] = {
    "Ideas and Content", "Organization", "Voice",
    "Word Choice",       "Sentence Fluency", "Conventions"};

struct EssayRecord {
  long essay_id = 0;
  int essay_set = 8;
  std::string body;
  TraitScores rater1;
  TraitScores rater2;
  std::optional<TraitScores> rater3;
  std::optional<int> resolved_final;
  bool encoding_lossy = false;  // body contained invalid UTF-8, sanitized

  bool operator==(const EssayRecord&) const = default;
};

// Column layout of the tab-delimited distribution file. Fields are addressed
// by header name; trait columns are <prefix><1..6>.
struct ColumnMapping {
  char delimiter = '\t';
  std::string essay_id = "essay_id";
  std::string essay_set = "essay_set";
  std::string essay = "essay";
  std::string rater1_trait_prefix = "rater1_trait";
  std::string rater2_trait_prefix = "rater2_trait";
  std::string rater3_trait_prefix = "rater3_trait";  // optional columns
  std::string resolved = "domain1_score";            // optional column
  int keep_essay_set = 8;  // rows from other sets are skipped
};

struct ParseOptions {
  bool strict = false;  // strict: malformed row throws RowError naming the line
};

struct RowIssue {
  std::size_t line;  // 1-based line number in the file
  std::string message;
};

struct ParsedDataset {
  std::vector<EssayRecord> records;  // file order
  std::vector<RowIssue> issues;      // skipped rows in lenient mode
};

ParsedDataset parse_dataset(const std::string& path, const ColumnMapping& mapping,
                            const ParseOptions& options = {});

// Serializes records back to the same tab-delimited layout (used for fixture
// round-trips). Bodies must not contain the delimiter or newlines.
std::string serialize_dataset(const std::vector<EssayRecord>& records,
                              const ColumnMapping& mapping);
ParsedDataset parse_dataset_text(const std::string& text, const ColumnMapping& mapping,
                                 const ParseOptions& options = {});

// Overall score for one rater: I&C + Org + SF + 2*Conv, range [5, 30].
// Voice and word choice are scored but do not count.
int rater_overall(const TraitScores& t);

// Two-rater final: rater_overall(r1) + rater_overall(r2), range [10, 60].
int combined_final(const TraitScores& r1, const TraitScores& r2);

// Human-resolved score: the distribution's resolved column when present,
// otherwise the summed two-rater final.
int human_resolved_score(const EssayRecord& record);

std::vector<EssayRecord> first_n(const std::vector<EssayRecord>& records, std::size_t n);

// The bundled six-criterion rubric (levels 1..6, weights 1,1,0,0,1,2 in trait
// order) with descriptors loaded from the assets directory.
Rubric build_set8_rubric();

}  // namespace reval
