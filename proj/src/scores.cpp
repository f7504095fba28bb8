#include "reval/scores.hpp"

#include <set>

#include "reval/error.hpp"

namespace reval {

const char* verdict_name(Verdict v) { return v == Verdict::Pass ? "PASS" : "REVISE"; }

const CategoryScore* ScoreSet::find_entry(const std::string& criterion_name) const {
  for (const auto& e : entries)
    if (e.criterion_name == criterion_name) return &e;
  return nullptr;
}

Rational weighted_total(const ScoreSet& scores, const Rubric& rubric) {
  std::set<std::string> rubric_names;
  for (const auto& c : rubric.criteria) rubric_names.insert(c.name);
  for (const auto& e : scores.entries) {
    if (!rubric_names.count(e.criterion_name))
      throw Error(ErrorCode::UnknownCriterion,
                  "score entry for unknown criterion '" + e.criterion_name + "'");
  }

  Rational total{0};
  for (const auto& c : rubric.criteria) {
    const CategoryScore* entry = scores.find_entry(c.name);
    if (!entry)
      throw Error(ErrorCode::MissingCriterion, "no score entry for criterion '" + c.name + "'");
    total = total + c.weight * entry->score;
  }
  return total;
}

HighlightResult highlight_spans(const ScoreSet& scores, const RecordText& record) {
  HighlightResult result;
  for (const auto& entry : scores.entries) {
    for (const Span& span : entry.cited_record_spans) {
      if (span.start <= span.end && span.end <= record.body.size()) {
        result.valid.push_back({entry.criterion_name, span,
                                record.body.substr(span.start, span.end - span.start)});
      } else {
        result.invalid.push_back({entry.criterion_name, span, ""});
      }
    }
  }
  return result;
}

}  // namespace reval
