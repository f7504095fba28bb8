#pragma once

#include <string>

#include "reval/rubric.hpp"

namespace reval {

// Canonical rubric text format. One document per rubric:
//
//   rubric: <id>
//   title: <title>
//   note: <domain note>
//
//   criterion: <name> | weight: <rational>
//     <score> | <label> | <descriptor>
//     <score> | <label> | <descriptor>
//
// Text fields are escaped with backslashes (\\ \| \n \r) so pipes and
// newlines round-trip exactly. The format is stable; it is what gets hashed
// into version manifests.
std::string render_rubric(const Rubric& rubric);

// Parses either the canonical format above or a tolerant markdown-table
// variant (## headings per criterion, pipe tables with Score/Label/Descriptor
// columns). Markdown tables may omit the weight (defaults to 1) and the score
// column (defaults to 1..N ascending). The result is validated; a structurally
// unreadable input throws ParseError with a line number, an invalid rubric
// throws ValidationError listing every violation.
Rubric parse_rubric(const std::string& text);

// A rubric plus its review status, as persisted on disk. The approval flag
// lives in the file header; only approved rubrics may drive scoring runs.
struct RubricDocument {
  Rubric rubric;
  bool approved = false;

  bool operator==(const RubricDocument&) const = default;
};

std::string render_rubric_document(const RubricDocument& doc);
RubricDocument parse_rubric_document(const std::string& text);

void save_rubric_file(const RubricDocument& doc, const std::string& path);
RubricDocument load_rubric_file(const std::string& path);

// Escape helpers shared by the rubric and payload grammars.
std::string escape_field(const std::string& raw);
std::string unescape_field(const std::string& escaped);

}  // namespace reval
