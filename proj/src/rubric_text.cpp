#include "reval/rubric_text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "reval/error.hpp"

namespace reval {

std::string escape_field(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '|': out += "\\|"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_field(const std::string& escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    char c = escaped[i];
    if (c == '\\' && i + 1 < escaped.size()) {
      char n = escaped[++i];
      switch (n) {
        case '\\': out.push_back('\\'); break;
        case '|': out.push_back('|'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        default:
          out.push_back('\\');
          out.push_back(n);
      }
    } else {
      out.push_back(c);
    }
  }
  return out;
}

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

// Splits an escaped line on unescaped '|' separators, removing at most one
// space of margin on each side of every field (the margin the renderer adds).
std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '\\' && i + 1 < line.size()) {
      current.push_back(c);
      current.push_back(line[++i]);
    } else if (c == '|') {
      fields.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  for (auto& f : fields) {
    if (!f.empty() && f.front() == ' ') f.erase(f.begin());
    if (!f.empty() && f.back() == ' ') f.pop_back();
  }
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool starts_with(const std::string& s, const char* prefix) {
  return s.rfind(prefix, 0) == 0;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& message) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no + 1) + ": " + message);
}

// Value of a "key: rest of line" header; exactly one space after the colon is
// the renderer's margin, anything beyond it belongs to the value.
std::string header_value(const std::string& line, std::size_t key_len) {
  std::string v = line.substr(key_len);
  if (!v.empty() && v.front() == ' ') v.erase(v.begin());
  return unescape_field(v);
}

void validate_or_throw(const Rubric& r) {
  auto violations = validate_rubric(r);
  if (violations.empty()) return;
  std::string msg = "parsed rubric is invalid:";
  for (const auto& v : violations) msg += " [" + v.path + "] " + v.message + ";";
  throw Error(ErrorCode::ValidationError, msg);
}

struct CanonicalParse {
  Rubric rubric;
  std::optional<bool> approved;
};

CanonicalParse parse_canonical(const std::vector<std::string>& lines) {
  CanonicalParse result;
  Rubric& r = result.rubric;
  Criterion* current = nullptr;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (trim(line).empty()) continue;

    if (starts_with(line, "rubric:")) {
      r.id = header_value(line, 7);
    } else if (starts_with(line, "title:")) {
      r.title = header_value(line, 6);
    } else if (starts_with(line, "note:")) {
      r.domain_note = header_value(line, 5);
    } else if (starts_with(line, "approved:")) {
      std::string v = trim(header_value(line, 9));
      if (v == "true") result.approved = true;
      else if (v == "false") result.approved = false;
      else parse_fail(i, "approved must be 'true' or 'false', got '" + v + "'");
    } else if (starts_with(line, "criterion:")) {
      auto fields = split_fields(line.substr(10));
      if (fields.size() != 2) parse_fail(i, "criterion line needs 'name | weight: w'");
      if (!starts_with(fields[1], "weight:")) parse_fail(i, "missing 'weight:' in criterion line");
      Criterion c;
      c.name = unescape_field(fields[0]);
      try {
        c.weight = Rational::from_string(fields[1].substr(7));
      } catch (const Error& e) {
        parse_fail(i, e.what());
      }
      r.criteria.push_back(std::move(c));
      current = &r.criteria.back();
    } else if (starts_with(line, "  ")) {
      if (!current) parse_fail(i, "level line before any criterion");
      auto fields = split_fields(line.substr(2));
      if (fields.size() != 3) parse_fail(i, "level line needs 'score | label | descriptor'");
      Level l;
      try {
        std::size_t pos = 0;
        l.score = std::stoi(fields[0], &pos);
        if (pos != fields[0].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        parse_fail(i, "bad level score '" + fields[0] + "'");
      }
      l.label = unescape_field(fields[1]);
      l.descriptor = unescape_field(fields[2]);
      current->levels.push_back(std::move(l));
    } else {
      parse_fail(i, "unrecognized line: " + line);
    }
  }
  return result;
}

// --- tolerant markdown tables ------------------------------------------------

bool is_table_row(const std::string& line) {
  std::string t = trim(line);
  return t.size() >= 2 && t.front() == '|' && t.back() == '|';
}

bool is_separator_row(const std::string& line) {
  std::string t = trim(line);
  if (t.empty()) return false;
  bool any_dash = false;
  for (char c : t) {
    if (c == '-') any_dash = true;
    else if (c != '|' && c != ':' && c != ' ') return false;
  }
  return any_dash;
}

std::vector<std::string> split_table_cells(const std::string& line) {
  std::string t = trim(line);
  t = t.substr(1, t.size() - 2);  // strip outer pipes
  std::vector<std::string> cells;
  std::string current;
  for (char c : t) {
    if (c == '|') {
      cells.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  cells.push_back(trim(current));
  return cells;
}

// "Organization (weight: 2)" -> name + weight
void extract_weight_suffix(std::string& name, Rational& weight) {
  std::string low = lower(name);
  auto pos = low.rfind("(weight");
  if (pos == std::string::npos) return;
  auto close = name.find(')', pos);
  if (close == std::string::npos) return;
  std::string inner = name.substr(pos + 7, close - pos - 7);
  if (!inner.empty() && inner[0] == ':') inner = inner.substr(1);
  try {
    weight = Rational::from_string(inner);
  } catch (const Error&) {
    return;  // not a weight annotation, leave the name alone
  }
  name = trim(name.substr(0, pos));
}

Rubric parse_markdown(const std::vector<std::string>& lines) {
  Rubric r;
  struct PendingCriterion {
    Criterion criterion;
    int score_col = -1;
    int label_col = -1;
    int desc_col = -1;
    bool header_seen = false;
  };
  std::optional<PendingCriterion> pending;

  auto flush = [&]() {
    if (!pending) return;
    // default scores 1..N ascending, labels "Level <score>"
    int next = 1;
    for (auto& l : pending->criterion.levels) {
      if (pending->score_col < 0) l.score = next;
      if (pending->label_col < 0 || l.label.empty())
        l.label = "Level " + std::to_string(l.score);
      ++next;
    }
    r.criteria.push_back(std::move(pending->criterion));
    pending.reset();
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& raw = lines[i];
    std::string t = trim(raw);
    if (t.empty()) continue;

    if (starts_with(t, "###") || starts_with(t, "## ")) {
      flush();
      std::string name = trim(t.substr(t.find_first_not_of("# ")));
      PendingCriterion p;
      p.criterion.weight = Rational(1);
      extract_weight_suffix(name, p.criterion.weight);
      p.criterion.name = name;
      pending = std::move(p);
    } else if (starts_with(t, "# ")) {
      if (r.title.empty()) r.title = trim(t.substr(2));
    } else if (is_table_row(t)) {
      if (!pending) parse_fail(i, "table row before any criterion heading");
      if (is_separator_row(t)) continue;
      auto cells = split_table_cells(t);
      if (!pending->header_seen) {
        pending->header_seen = true;
        for (std::size_t c = 0; c < cells.size(); ++c) {
          std::string h = lower(cells[c]);
          if (pending->score_col < 0 &&
              (h.find("score") != std::string::npos || h.find("points") != std::string::npos)) {
            pending->score_col = static_cast<int>(c);
          } else if (pending->label_col < 0 &&
                     (h.find("label") != std::string::npos ||
                      h.find("level") != std::string::npos ||
                      h.find("rating") != std::string::npos)) {
            pending->label_col = static_cast<int>(c);
          } else if (pending->desc_col < 0 && h.find("desc") != std::string::npos) {
            pending->desc_col = static_cast<int>(c);
          }
        }
        if (pending->desc_col < 0) pending->desc_col = static_cast<int>(cells.size()) - 1;
        continue;
      }
      Level l;
      auto cell = [&](int col) -> std::string {
        if (col < 0 || col >= static_cast<int>(cells.size())) return "";
        return cells[static_cast<std::size_t>(col)];
      };
      if (pending->score_col >= 0) {
        std::string sc = cell(pending->score_col);
        try {
          l.score = std::stoi(sc);
        } catch (const std::exception&) {
          parse_fail(i, "bad score cell '" + sc + "'");
        }
      }
      l.label = cell(pending->label_col);
      l.descriptor = cell(pending->desc_col);
      pending->criterion.levels.push_back(std::move(l));
    }
    // anything else in markdown mode is prose; ignore it
  }
  flush();
  return r;
}

bool looks_canonical(const std::vector<std::string>& lines) {
  for (const auto& line : lines) {
    std::string t = trim(line);
    if (t.empty()) continue;
    return starts_with(line, "rubric:") || starts_with(line, "title:") ||
           starts_with(line, "note:") || starts_with(line, "criterion:") ||
           starts_with(line, "approved:");
  }
  return false;
}

}  // namespace

std::string render_rubric(const Rubric& rubric) {
  std::ostringstream out;
  out << "rubric: " << escape_field(rubric.id) << "\n";
  out << "title: " << escape_field(rubric.title) << "\n";
  out << "note: " << escape_field(rubric.domain_note) << "\n";
  for (const auto& c : rubric.criteria) {
    out << "\ncriterion: " << escape_field(c.name) << " | weight: " << c.weight.to_string()
        << "\n";
    for (const auto& l : c.levels) {
      out << "  " << l.score << " | " << escape_field(l.label) << " | "
          << escape_field(l.descriptor) << "\n";
    }
  }
  return out.str();
}

Rubric parse_rubric(const std::string& text) {
  auto lines = split_lines(text);
  bool all_blank = true;
  for (const auto& l : lines)
    if (!trim(l).empty()) all_blank = false;
  if (lines.empty() || all_blank) throw Error(ErrorCode::ParseError, "empty rubric text");

  Rubric r;
  if (looks_canonical(lines)) {
    r = parse_canonical(lines).rubric;
  } else {
    r = parse_markdown(lines);
  }
  validate_or_throw(r);
  return r;
}

std::string render_rubric_document(const RubricDocument& doc) {
  std::string body = render_rubric(doc.rubric);
  auto insert_at = body.find('\n');  // after the "rubric:" line
  std::string approved_line = "approved: " + std::string(doc.approved ? "true" : "false");
  return body.substr(0, insert_at + 1) + approved_line + "\n" + body.substr(insert_at + 1);
}

RubricDocument parse_rubric_document(const std::string& text) {
  auto lines = split_lines(text);
  if (!looks_canonical(lines))
    return RubricDocument{parse_rubric(text), false};
  auto parsed = parse_canonical(lines);
  validate_or_throw(parsed.rubric);
  return RubricDocument{parsed.rubric, parsed.approved.value_or(false)};
}

void save_rubric_file(const RubricDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write rubric file: " + path);
  out << render_rubric_document(doc);
  if (!out) throw Error(ErrorCode::IoError, "failed writing rubric file: " + path);
}

RubricDocument load_rubric_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read rubric file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rubric_document(buf.str());
}

}  // namespace reval
