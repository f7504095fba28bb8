#include "reval/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "reval/assets.hpp"
#include "reval/error.hpp"
#include "reval/rubric_text.hpp"

namespace reval {

int TraitScores::trait(std::size_t index) const {
  switch (index) {
    case 0: return ideas_content;
    case 1: return organization;
    case 2: return voice;
    case 3: return word_choice;
    case 4: return sentence_fluency;
    case 5: return conventions;
  }
  throw Error(ErrorCode::OutOfRange, "trait index out of range");
}

namespace {

// Replaces invalid UTF-8 sequences with U+FFFD. Returns true if anything was
// replaced (the distribution file has Windows-1252 leftovers).
bool sanitize_utf8(std::string& text) {
  static const std::string replacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(text.size());
  bool changed = false;
  std::size_t i = 0;
  const auto bad = [&]() {
    out += replacement;
    changed = true;
    ++i;
  };
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    if (c < 0x80) len = 1;
    else if ((c & 0xE0) == 0xC0) len = 2;
    else if ((c & 0xF0) == 0xE0) len = 3;
    else if ((c & 0xF8) == 0xF0) len = 4;
    else {
      bad();
      continue;
    }
    if (i + len > text.size()) {
      bad();
      continue;
    }
    bool ok = true;
    for (std::size_t j = 1; j < len; ++j) {
      if ((static_cast<unsigned char>(text[i + j]) & 0xC0) != 0x80) ok = false;
    }
    if (len == 2 && c < 0xC2) ok = false;  // overlong
    if (!ok) {
      bad();
      continue;
    }
    out.append(text, i, len);
    i += len;
  }
  if (changed) text = std::move(out);
  return changed;
}

std::vector<std::string> split_row(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == delimiter) {
      fields.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

struct HeaderIndex {
  std::map<std::string, std::size_t> by_name;

  int find(const std::string& name) const {
    auto it = by_name.find(name);
    return it == by_name.end() ? -1 : static_cast<int>(it->second);
  }
};

class RowReader {
 public:
  RowReader(const std::vector<std::string>& fields, std::size_t line)
      : fields_(fields), line_(line) {}

  std::string raw(int index) const {
    if (index < 0 || index >= static_cast<int>(fields_.size())) return "";
    return fields_[static_cast<std::size_t>(index)];
  }

  long integer(int index, const std::string& what) const {
    const std::string v = raw(index);
    if (v.empty())
      throw Error(ErrorCode::RowError,
                  "line " + std::to_string(line_) + ": empty " + what + " field");
    try {
      std::size_t pos = 0;
      long r = std::stol(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing characters");
      return r;
    } catch (const std::exception&) {
      throw Error(ErrorCode::RowError,
                  "line " + std::to_string(line_) + ": bad " + what + " value '" + v + "'");
    }
  }

  int trait_value(int index, const std::string& what) const {
    const long v = integer(index, what);
    if (v < 1 || v > 6)
      throw Error(ErrorCode::RowError, "line " + std::to_string(line_) + ": " + what + " value " +
                                           std::to_string(v) + " outside 1..6");
    return static_cast<int>(v);
  }

  bool has_value(int index) const { return index >= 0 && !raw(index).empty(); }

 private:
  const std::vector<std::string>& fields_;
  std::size_t line_;
};

}  // namespace

ParsedDataset parse_dataset_text(const std::string& text, const ColumnMapping& mapping,
                                 const ParseOptions& options) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::MappingError, "dataset has no header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  HeaderIndex header;
  {
    auto names = split_row(line, mapping.delimiter);
    for (std::size_t i = 0; i < names.size(); ++i) header.by_name.emplace(names[i], i);
  }

  auto require_column = [&](const std::string& name) {
    const int idx = header.find(name);
    if (idx < 0) throw Error(ErrorCode::MappingError, "missing required column '" + name + "'");
    return idx;
  };

  const int col_id = require_column(mapping.essay_id);
  const int col_set = require_column(mapping.essay_set);
  const int col_body = require_column(mapping.essay);
  int r1[6], r2[6], r3[6];
  for (int t = 0; t < 6; ++t) {
    r1[t] = require_column(mapping.rater1_trait_prefix + std::to_string(t + 1));
    r2[t] = require_column(mapping.rater2_trait_prefix + std::to_string(t + 1));
    r3[t] = header.find(mapping.rater3_trait_prefix + std::to_string(t + 1));
  }
  const int col_resolved = header.find(mapping.resolved);

  ParsedDataset result;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    auto fields = split_row(line, mapping.delimiter);
    RowReader row(fields, line_no);
    try {
      const long set = row.integer(col_set, "essay_set");
      if (set != mapping.keep_essay_set) continue;

      EssayRecord rec;
      rec.essay_id = row.integer(col_id, "essay_id");
      rec.essay_set = static_cast<int>(set);
      rec.body = row.raw(col_body);
      rec.encoding_lossy = sanitize_utf8(rec.body);
      if (rec.body.empty())
        throw Error(ErrorCode::RowError,
                    "line " + std::to_string(line_no) + ": empty essay body");

      TraitScores t1, t2;
      for (int t = 0; t < 6; ++t) {
        const std::string label = kTraitLabels[t];
        const int v1 = row.trait_value(r1[t], "rater1 " + label);
        const int v2 = row.trait_value(r2[t], "rater2 " + label);
        switch (t) {
          case 0: t1.ideas_content = v1; t2.ideas_content = v2; break;
          case 1: t1.organization = v1; t2.organization = v2; break;
          case 2: t1.voice = v1; t2.voice = v2; break;
          case 3: t1.word_choice = v1; t2.word_choice = v2; break;
          case 4: t1.sentence_fluency = v1; t2.sentence_fluency = v2; break;
          case 5: t1.conventions = v1; t2.conventions = v2; break;
        }
      }
      rec.rater1 = t1;
      rec.rater2 = t2;

      bool any_r3 = false, all_r3 = true;
      for (int t = 0; t < 6; ++t) {
        if (row.has_value(r3[t])) any_r3 = true;
        else all_r3 = false;
      }
      if (any_r3 && all_r3) {
        TraitScores t3;
        t3.ideas_content = row.trait_value(r3[0], "rater3 I&C");
        t3.organization = row.trait_value(r3[1], "rater3 Org");
        t3.voice = row.trait_value(r3[2], "rater3 Voice");
        t3.word_choice = row.trait_value(r3[3], "rater3 WC");
        t3.sentence_fluency = row.trait_value(r3[4], "rater3 SF");
        t3.conventions = row.trait_value(r3[5], "rater3 Conv");
        rec.rater3 = t3;
      }
      if (row.has_value(col_resolved))
        rec.resolved_final = static_cast<int>(row.integer(col_resolved, "resolved score"));

      result.records.push_back(std::move(rec));
    } catch (const Error& e) {
      if (options.strict) throw;
      result.issues.push_back({line_no, e.what()});
    }
  }
  return result;
}

ParsedDataset parse_dataset(const std::string& path, const ColumnMapping& mapping,
                            const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read dataset: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset_text(buf.str(), mapping, options);
}

std::string serialize_dataset(const std::vector<EssayRecord>& records,
                              const ColumnMapping& mapping) {
  const char d = mapping.delimiter;
  std::ostringstream out;
  out << mapping.essay_id << d << mapping.essay_set << d << mapping.essay;
  for (int t = 0; t < 6; ++t) out << d << mapping.rater1_trait_prefix << (t + 1);
  for (int t = 0; t < 6; ++t) out << d << mapping.rater2_trait_prefix << (t + 1);
  for (int t = 0; t < 6; ++t) out << d << mapping.rater3_trait_prefix << (t + 1);
  out << d << mapping.resolved << "\n";

  for (const auto& rec : records) {
    if (rec.body.find(d) != std::string::npos || rec.body.find('\n') != std::string::npos)
      throw Error(ErrorCode::FormatError,
                  "essay body of record " + std::to_string(rec.essay_id) +
                      " contains the delimiter or a newline");
    out << rec.essay_id << d << rec.essay_set << d << rec.body;
    for (int t = 0; t < 6; ++t) out << d << rec.rater1.trait(t);
    for (int t = 0; t < 6; ++t) out << d << rec.rater2.trait(t);
    for (int t = 0; t < 6; ++t) {
      out << d;
      if (rec.rater3) out << rec.rater3->trait(t);
    }
    out << d;
    if (rec.resolved_final) out << *rec.resolved_final;
    out << "\n";
  }
  return out.str();
}

int rater_overall(const TraitScores& t) {
  return t.ideas_content + t.organization + t.sentence_fluency + 2 * t.conventions;
}

int combined_final(const TraitScores& r1, const TraitScores& r2) {
  return rater_overall(r1) + rater_overall(r2);
}

int human_resolved_score(const EssayRecord& record) {
  if (record.resolved_final) return *record.resolved_final;
  return combined_final(record.rater1, record.rater2);
}

std::vector<EssayRecord> first_n(const std::vector<EssayRecord>& records, std::size_t n) {
  if (n >= records.size()) return records;
  return std::vector<EssayRecord>(records.begin(), records.begin() + static_cast<long>(n));
}

Rubric build_set8_rubric() {
  const std::string path = asset_dir() + "/set8_rubric.txt";
  Rubric rubric = parse_rubric(read_text_file(path));

  // The bundled file is data; pin the contract here so a bad edit fails fast.
  if (rubric.criteria.size() != 6)
    throw Error(ErrorCode::ValidationError, "bundled rubric must have six criteria");
  static const int expected_weights[6] = {1, 1, 0, 0, 1, 2};
  for (int i = 0; i < 6; ++i) {
    if (rubric.criteria[static_cast<std::size_t>(i)].name != kTraitCriterionNames[i])
      throw Error(ErrorCode::ValidationError,
                  std::string("bundled rubric criterion ") + std::to_string(i) + " must be '" +
                      kTraitCriterionNames[i] + "'");
    if (rubric.criteria[static_cast<std::size_t>(i)].weight != Rational(expected_weights[i]))
      throw Error(ErrorCode::ValidationError,
                  "bundled rubric weight mismatch for " + rubric.criteria[i].name);
  }
  return rubric;
}

}  // namespace reval
