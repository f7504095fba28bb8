#include "reval/rubric.hpp"

#include <algorithm>
#include <set>

#include "reval/error.hpp"

namespace reval {

const Level* Criterion::find_level(const std::string& label) const {
  for (const auto& l : levels)
    if (l.label == label) return &l;
  return nullptr;
}

const Level* Criterion::find_level_by_score(int score) const {
  for (const auto& l : levels)
    if (l.score == score) return &l;
  return nullptr;
}

const Criterion* Rubric::find_criterion(const std::string& name) const {
  for (const auto& c : criteria)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<Violation> validate_rubric(const Rubric& rubric) {
  std::vector<Violation> out;
  auto add = [&](std::string path, std::string message) {
    out.push_back({std::move(path), std::move(message)});
  };

  if (rubric.criteria.empty()) {
    add("criteria", "rubric has no criteria");
    return out;
  }

  std::set<std::string> seen_names;
  bool any_positive_weight = false;
  for (std::size_t i = 0; i < rubric.criteria.size(); ++i) {
    const Criterion& c = rubric.criteria[i];
    const std::string path = "criteria[" + std::to_string(i) + "](" + c.name + ")";

    if (c.name.empty()) add(path, "criterion name empty");
    if (!seen_names.insert(c.name).second)
      add(path, "duplicate criterion name '" + c.name + "'");

    if (c.weight.is_negative()) add(path, "weight is negative");
    if (c.weight > Rational(0)) any_positive_weight = true;

    if (c.levels.size() < 2) add(path, "criterion needs at least 2 levels");

    std::set<std::string> seen_labels;
    for (std::size_t j = 0; j < c.levels.size(); ++j) {
      const Level& l = c.levels[j];
      const std::string lpath = path + ".levels[" + std::to_string(j) + "]";
      if (!seen_labels.insert(l.label).second)
        add(lpath, "duplicate level label '" + l.label + "'");
      if (l.descriptor.empty()) add(lpath, "descriptor empty");
      if (j > 0 && c.levels[j - 1].score >= l.score) {
        add(lpath, "level scores not strictly increasing");
      }
    }
  }
  if (!any_positive_weight) add("criteria", "all weights are zero; at least one must be positive");
  return out;
}

const char* edit_kind_name(const RubricEdit& edit) {
  struct Visitor {
    const char* operator()(const AddCriterion&) const { return "AddCriterion"; }
    const char* operator()(const RemoveCriterion&) const { return "RemoveCriterion"; }
    const char* operator()(const AddLevel&) const { return "AddLevel"; }
    const char* operator()(const RemoveLevel&) const { return "RemoveLevel"; }
    const char* operator()(const SetWeight&) const { return "SetWeight"; }
    const char* operator()(const SetLevelScore&) const { return "SetLevelScore"; }
    const char* operator()(const EditDescriptor&) const { return "EditDescriptor"; }
  };
  return std::visit(Visitor{}, edit);
}

namespace {

Criterion& require_criterion(Rubric& r, const std::string& name) {
  for (auto& c : r.criteria)
    if (c.name == name) return c;
  throw Error(ErrorCode::NotFound, "criterion '" + name + "' not found");
}

Level& require_level(Criterion& c, const std::string& label) {
  for (auto& l : c.levels)
    if (l.label == label) return l;
  throw Error(ErrorCode::NotFound,
              "level '" + label + "' not found in criterion '" + c.name + "'");
}

}  // namespace

Rubric apply_edit(const Rubric& rubric, const RubricEdit& edit) {
  Rubric result = rubric;

  if (const auto* e = std::get_if<AddCriterion>(&edit)) {
    result.criteria.push_back(e->criterion);
  } else if (const auto* e = std::get_if<RemoveCriterion>(&edit)) {
    auto& cs = result.criteria;
    auto it = std::find_if(cs.begin(), cs.end(),
                           [&](const Criterion& c) { return c.name == e->criterion; });
    if (it == cs.end())
      throw Error(ErrorCode::NotFound, "criterion '" + e->criterion + "' not found");
    cs.erase(it);
  } else if (const auto* e = std::get_if<AddLevel>(&edit)) {
    Criterion& c = require_criterion(result, e->criterion);
    auto pos = std::find_if(c.levels.begin(), c.levels.end(),
                            [&](const Level& l) { return l.score >= e->level.score; });
    c.levels.insert(pos, e->level);
  } else if (const auto* e = std::get_if<RemoveLevel>(&edit)) {
    Criterion& c = require_criterion(result, e->criterion);
    auto it = std::find_if(c.levels.begin(), c.levels.end(),
                           [&](const Level& l) { return l.label == e->label; });
    if (it == c.levels.end())
      throw Error(ErrorCode::NotFound,
                  "level '" + e->label + "' not found in criterion '" + c.name + "'");
    c.levels.erase(it);
  } else if (const auto* e = std::get_if<SetWeight>(&edit)) {
    require_criterion(result, e->criterion).weight = e->weight;
  } else if (const auto* e = std::get_if<SetLevelScore>(&edit)) {
    Criterion& c = require_criterion(result, e->criterion);
    require_level(c, e->label).score = e->score;
    std::stable_sort(c.levels.begin(), c.levels.end(),
                     [](const Level& a, const Level& b) { return a.score < b.score; });
  } else if (const auto* e = std::get_if<EditDescriptor>(&edit)) {
    Criterion& c = require_criterion(result, e->criterion);
    require_level(c, e->label).descriptor = e->descriptor;
  }

  auto violations = validate_rubric(result);
  if (!violations.empty()) {
    std::string msg = std::string(edit_kind_name(edit)) + " would break rubric invariants:";
    for (const auto& v : violations) msg += " [" + v.path + "] " + v.message + ";";
    throw Error(ErrorCode::InvalidEdit, msg);
  }
  return result;
}

}  // namespace reval
