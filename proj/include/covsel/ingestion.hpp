#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "covsel/matrix.hpp"

namespace covsel {

// ---------------------------------------------------------------------------
// Matrix CSV
//
// First row: empty corner cell, then the statement labels. Every following
// row: test label, then strictly "0"/"1" cells. Comma-separated, labels are
// bare tokens (no commas, no whitespace), which is why no quoting exists.
// ---------------------------------------------------------------------------

inline CoverageMatrix parse_matrix_csv(std::string_view text,
                                       std::vector<std::string>* warnings = nullptr) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("matrix file is empty");

  auto at = [](std::size_t lineno) { return "line " + std::to_string(lineno) + ": "; };

  auto header = split(lines[0].second, ',');
  if (!trim(header[0]).empty())
    throw ParseError(at(lines[0].first) + "top-left corner cell must be empty, got '" +
                     std::string(trim(header[0])) + "'");

  std::vector<StatementId> statements;
  std::set<std::string> seen_statements;
  for (std::size_t j = 1; j < header.size(); ++j) {
    std::string label(trim(header[j]));
    if (!is_valid_label(label))
      throw ParseError(at(lines[0].first) + "invalid statement label '" + label + "'");
    if (!seen_statements.insert(label).second)
      throw ParseError(at(lines[0].first) + "duplicate statement label '" + label + "'");
    statements.push_back(StatementId{std::move(label)});
  }

  std::vector<TestCaseId> tests;
  std::vector<std::vector<bool>> cells;
  std::set<std::string> seen_tests;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto [lineno, line] = lines[r];
    auto fields = split(line, ',');
    if (fields.size() != statements.size() + 1)
      throw ParseError(at(lineno) + "expected " + std::to_string(statements.size() + 1) +
                       " fields, got " + std::to_string(fields.size()));

    std::string label(trim(fields[0]));
    if (!is_valid_label(label))
      throw ParseError(at(lineno) + "invalid test label '" + label + "'");
    if (!seen_tests.insert(label).second)
      throw ParseError(at(lineno) + "duplicate test label '" + label + "'");

    std::vector<bool> row;
    row.reserve(statements.size());
    for (std::size_t j = 1; j < fields.size(); ++j) {
      auto cell = trim(fields[j]);
      if (cell == "0")
        row.push_back(false);
      else if (cell == "1")
        row.push_back(true);
      else
        throw ParseError(at(lineno) + "cell (" + label + ", " + statements[j - 1].label +
                         "): expected 0 or 1, got '" + std::string(cell) + "'");
    }
    tests.push_back(TestCaseId{std::move(label)});
    cells.push_back(std::move(row));
  }

  if (warnings) {
    if (tests.empty()) warnings->push_back("matrix has no test cases");
    if (statements.empty()) warnings->push_back("matrix has no statements");
  }
  return CoverageMatrix(std::move(tests), std::move(statements), std::move(cells));
}

/// Canonical form: LF line endings, no padding, no trailing separators.
/// Parsing the output reproduces the matrix exactly.
inline std::string write_matrix_csv(const CoverageMatrix& m) {
  std::string out;
  out.reserve((m.test_count() + 1) * (m.statement_count() * 2 + 8));
  for (const auto& s : m.statements()) {
    out += ',';
    out += s.label;
  }
  out += '\n';
  for (std::size_t i = 0; i < m.test_count(); ++i) {
    out += m.tests()[i].label;
    for (std::size_t j = 0; j < m.statement_count(); ++j) out += m.cell(i, j) ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Change specification
//
// Line-oriented:  `deleted: S3 S4 S6`  /  `modified: S2 S7 S15`
// '#' starts a comment, blank lines are ignored, repeated keys accumulate.
// ---------------------------------------------------------------------------

inline ChangeSet parse_changeset(std::string_view text, std::vector<std::string>* /*warnings*/ = nullptr) {
  std::vector<StatementId> deleted, modified;
  for (auto [lineno, raw] : split_lines(text)) {
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto colon = line.find(':');
    if (colon == std::string_view::npos)
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected 'deleted: <labels>' or 'modified: <labels>'");
    auto key = trim(line.substr(0, colon));
    auto rest = line.substr(colon + 1);

    std::vector<StatementId>* target = nullptr;
    if (key == "deleted")
      target = &deleted;
    else if (key == "modified")
      target = &modified;
    else
      throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + std::string(key) + "'");

    for (auto token : split_whitespace(rest)) {
      if (!is_valid_label(token))
        throw ParseError("line " + std::to_string(lineno) + ": invalid statement label '" +
                         std::string(token) + "'");
      target->push_back(StatementId{std::string(token)});
    }
  }
  return ChangeSet::of(std::move(deleted), std::move(modified));
}

// ---------------------------------------------------------------------------
// Statement <-> old-line mapping
//
// One entry per line:  `<label> <line>`  or  `<label> <file>:<line>`.
// Entries without a file part match that line in any file; entries with a
// file part take precedence for their file. Paths are compared against the
// diff's old-file path with any leading "a/" stripped.
// ---------------------------------------------------------------------------

class LineMap {
 public:
  static LineMap parse(std::string_view text) {
    LineMap map;
    for (auto [lineno, raw] : split_lines(text)) {
      std::string_view line = raw;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;

      auto tokens = split_whitespace(line);
      if (tokens.size() != 2)
        throw ParseError("line " + std::to_string(lineno) +
                         ": expected '<statement-label> <line>' or '<statement-label> <file>:<line>'");
      std::string label(tokens[0]);
      if (!is_valid_label(label))
        throw ParseError("line " + std::to_string(lineno) + ": invalid statement label '" + label + "'");

      std::string file;
      std::string_view spec = tokens[1];
      std::optional<long> number = parse_long(spec);
      if (!number) {
        auto colon = spec.rfind(':');
        if (colon == std::string_view::npos || colon == 0)
          throw ParseError("line " + std::to_string(lineno) + ": malformed line reference '" +
                           std::string(spec) + "'");
        file = std::string(spec.substr(0, colon));
        number = parse_long(spec.substr(colon + 1));
      }
      if (!number || *number <= 0)
        throw ParseError("line " + std::to_string(lineno) + ": malformed line reference '" +
                         std::string(spec) + "'");

      auto key = std::make_pair(file, *number);
      if (!map.entries_.emplace(key, label).second)
        throw ParseError("line " + std::to_string(lineno) + ": duplicate mapping for '" +
                         std::string(spec) + "'");
    }
    return map;
  }

  /// Scoped entry first, then the file-agnostic fallback.
  std::optional<std::string> lookup(const std::string& file, long line) const {
    if (!file.empty()) {
      auto it = entries_.find({file, line});
      if (it != entries_.end()) return it->second;
    }
    auto it = entries_.find({std::string(), line});
    if (it != entries_.end()) return it->second;
    return std::nullopt;
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::pair<std::string, long>, std::string> entries_;
};

// ---------------------------------------------------------------------------
// Unified diff -> change set
// ---------------------------------------------------------------------------

namespace diff_detail {

inline bool parse_hunk_header(std::string_view line, long& old_start, long& old_count,
                              long& new_start, long& new_count) {
  // "@@ -l[,n] +l[,n] @@" with optional trailing context
  if (!line.starts_with("@@ -")) return false;
  std::string_view rest = line.substr(4);

  auto read_range = [](std::string_view& s, long& start, long& count) {
    std::size_t i = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == 0) return false;
    auto v = parse_long(s.substr(0, i));
    if (!v) return false;
    start = *v;
    count = 1;
    s.remove_prefix(i);
    if (!s.empty() && s.front() == ',') {
      s.remove_prefix(1);
      std::size_t k = 0;
      while (k < s.size() && s[k] >= '0' && s[k] <= '9') ++k;
      if (k == 0) return false;
      auto c = parse_long(s.substr(0, k));
      if (!c) return false;
      count = *c;
      s.remove_prefix(k);
    }
    return true;
  };

  if (!read_range(rest, old_start, old_count)) return false;
  if (!rest.starts_with(" +")) return false;
  rest.remove_prefix(2);
  if (!read_range(rest, new_start, new_count)) return false;
  return rest.starts_with(" @@");
}

inline std::string normalize_old_path(std::string_view rest) {
  if (auto tab = rest.find('\t'); tab != std::string_view::npos) rest = rest.substr(0, tab);
  rest = trim(rest);
  if (rest == "/dev/null") return {};
  if (rest.starts_with("a/")) rest.remove_prefix(2);
  return std::string(rest);
}

}  // namespace diff_detail

/// Derives a change set from a unified diff and a statement/line map.
///
/// Within a hunk, a run of '-' lines immediately followed by a run of '+'
/// lines is a replacement: the removed lines pair positionally with the
/// added ones and count as modified, while removed lines beyond the length
/// of the '+' run count as deleted. A '-' run with no '+' run is a pure
/// deletion; '+' lines on their own are additions and contribute nothing,
/// since new statements have no column in the old matrix. Changed old
/// lines without a mapping entry produce a warning, not an error.
inline ChangeSet derive_changeset_from_diff(std::string_view diff_text, const LineMap& map,
                                            std::vector<std::string>* warnings = nullptr) {
  auto lines = split_lines(diff_text);

  std::set<std::string> deleted, modified;
  bool saw_additions = false;
  std::string old_file;

  auto warn = [&](std::string message) {
    if (warnings) warnings->push_back(std::move(message));
  };
  auto describe = [&](long line) {
    return old_file.empty() ? "old line " + std::to_string(line)
                            : "old line " + old_file + ":" + std::to_string(line);
  };
  auto classify = [&](long line, bool as_modified) {
    auto label = map.lookup(old_file, line);
    if (!label) {
      warn(describe(line) + " changed but is not mapped to a statement");
      return;
    }
    (as_modified ? modified : deleted).insert(*label);
  };

  std::size_t i = 0;
  while (i < lines.size()) {
    auto [lineno, line] = lines[i];
    if (line.starts_with("--- ")) {
      old_file = diff_detail::normalize_old_path(line.substr(4));
      ++i;
      continue;
    }
    if (!line.starts_with("@@")) {
      ++i;  // "+++" header, "diff --git", "index", and other noise
      continue;
    }

    long old_start = 0, old_count = 0, new_start = 0, new_count = 0;
    if (!diff_detail::parse_hunk_header(line, old_start, old_count, new_start, new_count))
      throw ParseError("line " + std::to_string(lineno) + ": malformed hunk header '" +
                       std::string(line) + "'");
    ++i;

    // Gather the hunk body, tracking old line numbers.
    std::vector<std::pair<char, long>> body;  // tag, old line ('+' carries -1)
    long old_line = old_start;
    long old_rem = old_count, new_rem = new_count;
    while (old_rem > 0 || new_rem > 0) {
      if (i >= lines.size())
        throw ParseError("line " + std::to_string(lines.back().first) + ": truncated hunk (" +
                         std::to_string(old_rem) + " old / " + std::to_string(new_rem) +
                         " new lines missing)");
      auto [blineno, bline] = lines[i];
      ++i;
      char tag = bline.empty() ? ' ' : bline[0];
      if (tag == '\\') continue;  // "\ No newline at end of file"
      switch (tag) {
        case ' ':
          if (old_rem == 0 || new_rem == 0)
            throw ParseError("line " + std::to_string(blineno) + ": hunk is longer than its header");
          --old_rem;
          --new_rem;
          body.emplace_back(' ', old_line++);
          break;
        case '-':
          if (old_rem == 0)
            throw ParseError("line " + std::to_string(blineno) + ": hunk is longer than its header");
          --old_rem;
          body.emplace_back('-', old_line++);
          break;
        case '+':
          if (new_rem == 0)
            throw ParseError("line " + std::to_string(blineno) + ": hunk is longer than its header");
          --new_rem;
          body.emplace_back('+', -1);
          break;
        default:
          throw ParseError("line " + std::to_string(blineno) + ": unexpected line in hunk body: '" +
                           std::string(bline) + "'");
      }
    }

    // Pair '-' runs with the '+' run that immediately follows them.
    std::size_t k = 0;
    while (k < body.size()) {
      if (body[k].first == '-') {
        std::vector<long> removed;
        while (k < body.size() && body[k].first == '-') removed.push_back(body[k++].second);
        std::size_t plus = 0;
        while (k < body.size() && body[k].first == '+') {
          ++plus;
          ++k;
        }
        for (std::size_t r = 0; r < removed.size(); ++r) classify(removed[r], r < plus);
        if (plus > removed.size()) saw_additions = true;
      } else {
        if (body[k].first == '+') saw_additions = true;
        ++k;
      }
    }
  }

  // A statement can surface as deleted in one hunk and modified in another
  // (unscoped mappings across files). It still exists afterwards, so
  // modified wins.
  for (auto it = deleted.begin(); it != deleted.end();) {
    if (modified.count(*it)) {
      warn("statement " + *it + " appears as both deleted and modified; keeping it as modified");
      it = deleted.erase(it);
    } else {
      ++it;
    }
  }
  if (saw_additions)
    warn("diff adds new lines; statements introduced by them have no column in the old matrix");

  std::vector<StatementId> del_ids, mod_ids;
  for (const auto& l : deleted) del_ids.push_back(StatementId{l});
  for (const auto& l : modified) mod_ids.push_back(StatementId{l});
  return ChangeSet::of(std::move(del_ids), std::move(mod_ids));
}

// ---------------------------------------------------------------------------
// LCOV import
//
// Minimal subset: SF: selects the current source file, DA:<line>,<hits>
// marks a statement "<file>:<line>" as covered when hits > 0, and
// end_of_record closes the file context. TN: is ignored (the test label
// comes from the record list); function and branch records are skipped
// with a notice since only statement coverage feeds the matrix.
// ---------------------------------------------------------------------------

inline CoverageMatrix import_lcov(const std::vector<std::pair<std::string, std::string>>& records,
                                  std::vector<std::string>* warnings = nullptr) {
  std::vector<TestCaseId> tests;
  std::vector<StatementId> statements;
  std::unordered_map<std::string, std::size_t> column;
  std::vector<std::vector<bool>> cells;
  std::set<std::string> seen_tests;
  bool skipped_non_line_records = false;

  static const char* kIgnored[] = {"FN:", "FNDA:", "FNF:", "FNH:", "BRDA:", "BRF:", "BRH:", "LF:", "LH:"};

  for (const auto& [test_label, text] : records) {
    if (!is_valid_label(test_label)) throw ParseError("invalid test label '" + test_label + "'");
    if (!seen_tests.insert(test_label).second)
      throw ParseError("duplicate test label '" + test_label + "'");

    auto fail = [&](std::size_t lineno, const std::string& message) -> ParseError {
      return ParseError("test '" + test_label + "', line " + std::to_string(lineno) + ": " + message);
    };

    std::vector<bool> row(statements.size(), false);
    std::string current_file;
    for (auto [lineno, raw] : split_lines(text)) {
      std::string_view line = trim(raw);
      if (line.empty()) continue;

      if (line.starts_with("SF:")) {
        current_file = std::string(trim(line.substr(3)));
        if (current_file.empty()) throw fail(lineno, "SF record with empty path");
      } else if (line.starts_with("DA:")) {
        if (current_file.empty()) throw fail(lineno, "DA record before any SF record");
        auto fields = split(line.substr(3), ',');
        if (fields.size() != 2 && fields.size() != 3)  // optional checksum field
          throw fail(lineno, "malformed DA record '" + std::string(line) + "'");
        auto line_no = parse_long(trim(fields[0]));
        auto hits = parse_long(trim(fields[1]));
        if (!line_no || *line_no <= 0 || !hits || *hits < 0)
          throw fail(lineno, "malformed DA record '" + std::string(line) + "'");

        std::string label = current_file + ":" + std::to_string(*line_no);
        auto [it, inserted] = column.emplace(label, statements.size());
        if (inserted) statements.push_back(StatementId{label});
        if (it->second >= row.size()) row.resize(it->second + 1, false);
        if (*hits > 0) row[it->second] = true;
      } else if (line == "end_of_record") {
        current_file.clear();
      } else if (line.starts_with("TN:")) {
        // test name lives in the record list, not here
      } else {
        bool ignored = false;
        for (const char* prefix : kIgnored) {
          if (line.starts_with(prefix)) {
            ignored = true;
            skipped_non_line_records = true;
            break;
          }
        }
        if (!ignored) throw fail(lineno, "unsupported record '" + std::string(line) + "'");
      }
    }
    tests.push_back(TestCaseId{test_label});
    cells.push_back(std::move(row));
  }

  for (auto& row : cells) row.resize(statements.size(), false);

  if (warnings) {
    if (skipped_non_line_records)
      warnings->push_back("function/branch records ignored: only DA line records contribute to "
                          "statement coverage");
    if (tests.empty()) warnings->push_back("matrix has no test cases");
    if (statements.empty()) warnings->push_back("matrix has no statements");
  }
  return CoverageMatrix(std::move(tests), std::move(statements), std::move(cells));
}

}  // namespace covsel
