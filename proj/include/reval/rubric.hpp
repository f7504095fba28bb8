#pragma once

#include <string>
#include <variant>
#include <vector>

#include "reval/rational.hpp"

namespace reval {

// One performance level within a criterion.
struct Level {
  std::string label;
  int score = 0;
  std::string descriptor;

  bool operator==(const Level&) const = default;
};

// One evaluated dimension. Weight >= 0; a zero weight means the criterion is
// scored but does not count toward the weighted total.
struct Criterion {
  std::string name;
  Rational weight{1};
  std::vector<Level> levels;  // ordered by strictly increasing score

  bool operator==(const Criterion&) const = default;
  const Level* find_level(const std::string& label) const;
  const Level* find_level_by_score(int score) const;
};

// The evaluation contract: weighted criteria, each with scored levels.
struct Rubric {
  std::string id;
  std::string title;
  std::string domain_note;
  std::vector<Criterion> criteria;

  bool operator==(const Rubric&) const = default;
  const Criterion* find_criterion(const std::string& name) const;
};

struct Violation {
  std::string path;     // e.g. "criteria[2](Org).levels[1]"
  std::string message;

  bool operator==(const Violation&) const = default;
};

// Returns every invariant violation; an empty list means the rubric is valid.
// Checked invariants:
//   - at least one criterion, criterion names unique
//   - every criterion has >= 2 levels
//   - weights >= 0 with at least one weight > 0
//   - level scores strictly increasing, level labels unique per criterion
//   - descriptors non-empty
std::vector<Violation> validate_rubric(const Rubric& rubric);

inline bool rubric_is_valid(const Rubric& r) { return validate_rubric(r).empty(); }

// --- Rubric edits (human review surface) ------------------------------------

struct AddCriterion { Criterion criterion; };
struct RemoveCriterion { std::string criterion; };
struct AddLevel { std::string criterion; Level level; };  // inserted by score order
struct RemoveLevel { std::string criterion; std::string label; };
struct SetWeight { std::string criterion; Rational weight; };
struct SetLevelScore { std::string criterion; std::string label; int score; };
struct EditDescriptor { std::string criterion; std::string label; std::string descriptor; };

using RubricEdit = std::variant<AddCriterion, RemoveCriterion, AddLevel, RemoveLevel,
                                SetWeight, SetLevelScore, EditDescriptor>;

const char* edit_kind_name(const RubricEdit& edit);

// Applies one edit to a copy of `rubric`. The result always satisfies the
// rubric invariants; an edit that would break them throws InvalidEdit, a
// missing target criterion/level throws NotFound.
Rubric apply_edit(const Rubric& rubric, const RubricEdit& edit);

}  // namespace reval
