#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "reval/rational.hpp"
#include "reval/rubric.hpp"

namespace reval {

// A piece of text under evaluation.
struct RecordText {
  std::string id;
  std::string body;

  bool operator==(const RecordText&) const = default;
};

// Half-open byte range [start, end) into a record body.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Span&) const = default;
};

struct CategoryScore {
  std::string criterion_name;
  int score = 0;
  std::string justification;
  std::vector<std::string> cited_rubric_language;
  std::vector<Span> cited_record_spans;

  bool operator==(const CategoryScore&) const = default;
};

// A full scoring of one record against one rubric. draft_index 0 is the
// scorer's initial draft; revisions increment it.
struct ScoreSet {
  std::string record_id;
  std::string rubric_id;
  std::vector<CategoryScore> entries;  // one per rubric criterion, rubric order
  Rational weighted_total;
  int draft_index = 0;

  bool operator==(const ScoreSet&) const = default;
  const CategoryScore* find_entry(const std::string& criterion_name) const;
};

enum class Verdict { Pass, Revise };

const char* verdict_name(Verdict v);

struct CritiqueItem {
  std::string criterion_name;
  std::string feedback;

  bool operator==(const CritiqueItem&) const = default;
};

// The critic's decision on a draft. Pass carries no items; Revise carries
// at least one.
struct Critique {
  Verdict verdict = Verdict::Pass;
  std::vector<CritiqueItem> items;
  std::string free_text;

  bool operator==(const Critique&) const = default;
};

// Sum over criteria of weight * score. Every rubric criterion must appear in
// the score set exactly once (MissingCriterion / UnknownCriterion otherwise).
Rational weighted_total(const ScoreSet& scores, const Rubric& rubric);

struct Highlight {
  std::string criterion_name;
  Span span;
  std::string quoted_text;  // empty for invalid spans

  bool operator==(const Highlight&) const = default;
};

struct HighlightResult {
  std::vector<Highlight> valid;
  std::vector<Highlight> invalid;  // spans outside the record body, reported not dropped
};

// Resolves every cited span of every entry against the record body.
HighlightResult highlight_spans(const ScoreSet& scores, const RecordText& record);

}  // namespace reval
