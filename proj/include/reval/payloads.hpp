#pragma once

#include <string>

#include "reval/rubric.hpp"
#include "reval/scores.hpp"

namespace reval {

// Returns the contents of the last complete fenced block of the given kind:
//
//   ```scores
//   ...payload...
//   ```
//
// Agents may surround blocks with prose; the last block wins. Throws
// BlockNotFound when no complete block of that kind exists.
std::string extract_block(const std::string& text, const std::string& block_kind);

// Score payload, one stanza per criterion:
//
//   criterion: <name>
//   score: <integer level score>
//   justification: <text>
//   cite-rubric: <rubric phrase>   (repeatable)
//   cite-span: <start>-<end>       (repeatable)
//
// Lines that start no keyword continue the justification. The parsed set is
// checked against the rubric: every criterion present exactly once and every
// score a legal level of its criterion. rubric_id and weighted_total are
// filled in; record_id and draft_index are the caller's.
ScoreSet parse_scoreset_payload(const std::string& payload, const Rubric& rubric);

// Critique payload: a mandatory "VERDICT: PASS" or "VERDICT: REVISE" token
// line, "- <criterion>: <feedback>" item lines, and free text. PASS with
// items or REVISE without items is a ValidationError.
Critique parse_critique_payload(const std::string& payload);

// Canonical renderings; parse(render(x)) == x. Used for prompts, exemplar
// documents, and replay scripts.
std::string render_scoreset_payload(const ScoreSet& scores);
std::string render_critique_payload(const Critique& critique);

std::string fence_block(const std::string& block_kind, const std::string& payload);

}  // namespace reval
