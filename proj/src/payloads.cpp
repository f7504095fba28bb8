#include "reval/payloads.hpp"

#include <optional>
#include <sstream>

#include "reval/error.hpp"
#include "reval/rubric_text.hpp"

namespace reval {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      if (!current.empty() && current.back() == '\r') current.pop_back();
      lines.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) lines.push_back(current);
  return lines;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return s.substr(b, e - b);
}

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

// "key: value" -> value with exactly one leading margin space removed
std::string key_value(const std::string& line, std::size_t key_len) {
  std::string v = line.substr(key_len);
  if (!v.empty() && v.front() == ' ') v.erase(v.begin());
  return v;
}

}  // namespace

std::string extract_block(const std::string& text, const std::string& block_kind) {
  const auto lines = split_lines(text);
  const std::string opener = "```" + block_kind;

  std::optional<std::string> last_block;
  std::optional<std::ostringstream> current;
  for (const auto& line : lines) {
    const std::string t = trim(line);
    if (!current) {
      if (t == opener) current.emplace();
      continue;
    }
    if (starts_with(t, "```")) {
      last_block = current->str();
      current.reset();
      continue;
    }
    if (current->tellp() > 0) *current << "\n";
    *current << line;
  }
  if (!last_block)
    throw Error(ErrorCode::BlockNotFound, "no complete ```" + block_kind + " block in completion");
  return *last_block;
}

std::string fence_block(const std::string& block_kind, const std::string& payload) {
  std::string out = "```" + block_kind + "\n" + payload;
  if (!payload.empty() && payload.back() != '\n') out += "\n";
  out += "```\n";
  return out;
}

ScoreSet parse_scoreset_payload(const std::string& payload, const Rubric& rubric) {
  ScoreSet set;
  set.rubric_id = rubric.id;

  CategoryScore* current = nullptr;
  bool score_seen = false;
  const auto lines = split_lines(payload);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (trim(line).empty()) continue;

    auto fail = [&](const std::string& msg) {
      throw Error(ErrorCode::ParseError,
                  "scores payload line " + std::to_string(i + 1) + ": " + msg);
    };

    if (starts_with(line, "criterion:")) {
      set.entries.emplace_back();
      current = &set.entries.back();
      current->criterion_name = unescape_field(trim(key_value(line, 10)));
      score_seen = false;
    } else if (!current) {
      fail("expected 'criterion:' first, got: " + line);
    } else if (starts_with(line, "score:")) {
      const std::string v = trim(key_value(line, 6));
      try {
        std::size_t pos = 0;
        current->score = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        fail("bad score '" + v + "'");
      }
      score_seen = true;
    } else if (starts_with(line, "justification:")) {
      current->justification = unescape_field(key_value(line, 14));
    } else if (starts_with(line, "cite-rubric:")) {
      current->cited_rubric_language.push_back(unescape_field(key_value(line, 12)));
    } else if (starts_with(line, "cite-span:")) {
      const std::string v = trim(key_value(line, 10));
      const auto dash = v.find('-');
      if (dash == std::string::npos) fail("bad span '" + v + "', expected start-end");
      try {
        Span span;
        span.start = std::stoul(v.substr(0, dash));
        span.end = std::stoul(v.substr(dash + 1));
        current->cited_record_spans.push_back(span);
      } catch (const std::exception&) {
        fail("bad span '" + v + "'");
      }
    } else {
      // agents soft-wrap prose; fold the line into the justification
      if (!current->justification.empty()) current->justification += "\n";
      current->justification += line;
    }
    (void)score_seen;
  }

  if (set.entries.empty())
    throw Error(ErrorCode::ParseError, "scores payload contains no criterion stanzas");

  // check against the rubric
  std::vector<std::string> problems;
  for (const auto& entry : set.entries) {
    const Criterion* criterion = rubric.find_criterion(entry.criterion_name);
    if (!criterion) {
      problems.push_back("unknown criterion '" + entry.criterion_name + "'");
      continue;
    }
    if (!criterion->find_level_by_score(entry.score))
      problems.push_back("score " + std::to_string(entry.score) + " is not a level of '" +
                         entry.criterion_name + "'");
    if (entry.justification.empty())
      problems.push_back("empty justification for '" + entry.criterion_name + "'");
  }
  for (const auto& criterion : rubric.criteria) {
    std::size_t count = 0;
    for (const auto& entry : set.entries)
      if (entry.criterion_name == criterion.name) ++count;
    if (count == 0) problems.push_back("missing criterion '" + criterion.name + "'");
    if (count > 1) problems.push_back("duplicate entries for criterion '" + criterion.name + "'");
  }
  if (!problems.empty()) {
    std::string msg = "scores payload invalid:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw Error(ErrorCode::ValidationError, msg);
  }

  set.weighted_total = weighted_total(set, rubric);
  return set;
}

Critique parse_critique_payload(const std::string& payload) {
  Critique critique;
  bool verdict_seen = false;
  std::string free_text;

  const auto lines = split_lines(payload);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string t = trim(lines[i]);
    if (t.empty()) continue;

    if (const auto pos = t.find("VERDICT:"); pos != std::string::npos && !verdict_seen) {
      const std::string v = trim(t.substr(pos + 8));
      if (v == "PASS") critique.verdict = Verdict::Pass;
      else if (v == "REVISE") critique.verdict = Verdict::Revise;
      else
        throw Error(ErrorCode::ParseError, "critique payload line " + std::to_string(i + 1) +
                                               ": VERDICT must be PASS or REVISE, got '" + v +
                                               "'");
      verdict_seen = true;
    } else if (starts_with(t, "- ")) {
      const std::string body = t.substr(2);
      const auto colon = body.find(':');
      if (colon == std::string::npos)
        throw Error(ErrorCode::ParseError, "critique payload line " + std::to_string(i + 1) +
                                               ": item needs '- criterion: feedback'");
      CritiqueItem item;
      item.criterion_name = trim(body.substr(0, colon));
      item.feedback = unescape_field(trim(body.substr(colon + 1)));
      critique.items.push_back(std::move(item));
    } else if (starts_with(t, "note:")) {
      if (!free_text.empty()) free_text += "\n";
      free_text += unescape_field(key_value(t, 5));
    } else {
      if (!free_text.empty()) free_text += "\n";
      free_text += t;
    }
  }

  if (!verdict_seen)
    throw Error(ErrorCode::ParseError, "critique payload has no VERDICT: PASS/REVISE token");
  critique.free_text = std::move(free_text);

  if (critique.verdict == Verdict::Pass && !critique.items.empty())
    throw Error(ErrorCode::ValidationError, "PASS verdict must not carry revision items");
  if (critique.verdict == Verdict::Revise && critique.items.empty())
    throw Error(ErrorCode::ValidationError, "REVISE verdict needs at least one item");
  return critique;
}

std::string render_scoreset_payload(const ScoreSet& scores) {
  std::ostringstream out;
  bool first = true;
  for (const auto& entry : scores.entries) {
    if (!first) out << "\n";
    first = false;
    out << "criterion: " << escape_field(entry.criterion_name) << "\n";
    out << "score: " << entry.score << "\n";
    out << "justification: " << escape_field(entry.justification) << "\n";
    for (const auto& phrase : entry.cited_rubric_language)
      out << "cite-rubric: " << escape_field(phrase) << "\n";
    for (const auto& span : entry.cited_record_spans)
      out << "cite-span: " << span.start << "-" << span.end << "\n";
  }
  return out.str();
}

std::string render_critique_payload(const Critique& critique) {
  std::ostringstream out;
  out << "VERDICT: " << verdict_name(critique.verdict) << "\n";
  for (const auto& item : critique.items)
    out << "- " << item.criterion_name << ": " << escape_field(item.feedback) << "\n";
  if (!critique.free_text.empty()) out << "note: " << escape_field(critique.free_text) << "\n";
  return out.str();
}

}  // namespace reval
