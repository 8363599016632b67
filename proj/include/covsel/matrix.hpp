#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "covsel/errors.hpp"
#include "covsel/util.hpp"

namespace covsel {

/// Identifier of one statement (a column). Statements have no intrinsic
/// order; whenever an order matters it is the column order of the matrix
/// at hand, never a lexicographic one.
struct StatementId {
  std::string label;

  StatementId() = default;
  StatementId(std::string l) : label(std::move(l)) {}
  StatementId(const char* l) : label(l) {}

  friend bool operator==(const StatementId&, const StatementId&) = default;
};

/// Identifier of one test case (a row). Row order doubles as the
/// tie-breaking order everywhere in the library.
struct TestCaseId {
  std::string label;

  TestCaseId() = default;
  TestCaseId(std::string l) : label(std::move(l)) {}
  TestCaseId(const char* l) : label(l) {}

  friend bool operator==(const TestCaseId&, const TestCaseId&) = default;
};

inline std::vector<std::string> labels_of(const std::vector<StatementId>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(id.label);
  return out;
}

inline std::vector<std::string> labels_of(const std::vector<TestCaseId>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(id.label);
  return out;
}

/// Boolean test-by-statement incidence matrix with explicitly ordered axes.
///
/// Values are immutable after construction; every operation returns a new
/// matrix, so instances can be shared freely across threads. Only the
/// label-ordered logical view is contractual: the constructor accepts any
/// cell rows and `validate` reports structural problems (ragged rows,
/// duplicate labels) instead of throwing. Cells beyond a short row read as
/// false. Operations assume a matrix that validates cleanly.
class CoverageMatrix {
 public:
  CoverageMatrix() = default;

  CoverageMatrix(std::vector<TestCaseId> tests, std::vector<StatementId> statements,
                 std::vector<std::vector<bool>> cells)
      : tests_(std::move(tests)), statements_(std::move(statements)), cells_(std::move(cells)) {
    cells_.resize(tests_.size());
    rebuild_index();
  }

  const std::vector<TestCaseId>& tests() const { return tests_; }
  const std::vector<StatementId>& statements() const { return statements_; }
  std::size_t test_count() const { return tests_.size(); }
  std::size_t statement_count() const { return statements_.size(); }

  /// Logical cell view; out-of-range coordinates read as false.
  bool cell(std::size_t row, std::size_t col) const {
    if (row >= cells_.size()) return false;
    const auto& r = cells_[row];
    return col < r.size() && r[col];
  }

  /// Stored width of one row, before logical padding. Differs from
  /// statement_count() exactly when the row is ragged.
  std::size_t stored_row_width(std::size_t row) const {
    return row < cells_.size() ? cells_[row].size() : 0;
  }

  std::optional<std::size_t> test_index(const TestCaseId& t) const {
    auto it = test_index_.find(t.label);
    if (it == test_index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> statement_index(const StatementId& s) const {
    auto it = statement_index_.find(s.label);
    if (it == statement_index_.end()) return std::nullopt;
    return it->second;
  }

  bool covers(const TestCaseId& t, const StatementId& s) const {
    auto r = test_index(t);
    auto c = statement_index(s);
    return r && c && cell(*r, *c);
  }

  /// Number of statements the given test executes.
  std::size_t row_coverage_count(const TestCaseId& t) const {
    return count_row(require_test(t));
  }

  /// The statements test `t` executes, in column order.
  std::vector<StatementId> covered_statements(const TestCaseId& t) const {
    std::size_t row = require_test(t);
    std::vector<StatementId> out;
    for (std::size_t j = 0; j < statements_.size(); ++j)
      if (cell(row, j)) out.push_back(statements_[j]);
    return out;
  }

  /// New matrix without the given columns; surviving columns keep their
  /// relative order, rows are untouched. Every unknown label is reported.
  CoverageMatrix remove_statements(const std::vector<StatementId>& drop) const {
    std::vector<char> dropped(statements_.size(), 0);
    mark_members(drop, dropped);
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < statements_.size(); ++j)
      if (!dropped[j]) kept.push_back(j);

    std::vector<StatementId> statements;
    statements.reserve(kept.size());
    for (std::size_t j : kept) statements.push_back(statements_[j]);

    std::vector<std::vector<bool>> cells(tests_.size());
    for (std::size_t i = 0; i < tests_.size(); ++i) {
      cells[i].reserve(kept.size());
      for (std::size_t j : kept) cells[i].push_back(cell(i, j));
    }
    return CoverageMatrix(tests_, std::move(statements), std::move(cells));
  }

  /// New matrix without the given rows; surviving rows keep their relative
  /// order, columns are untouched.
  CoverageMatrix remove_tests(const std::vector<TestCaseId>& drop) const {
    std::vector<char> dropped(tests_.size(), 0);
    mark_members(drop, dropped);

    std::vector<TestCaseId> tests;
    std::vector<std::vector<bool>> cells;
    for (std::size_t i = 0; i < tests_.size(); ++i) {
      if (dropped[i]) continue;
      tests.push_back(tests_[i]);
      cells.push_back(cells_[i]);
    }
    return CoverageMatrix(std::move(tests), statements_, std::move(cells));
  }

  friend bool operator==(const CoverageMatrix& a, const CoverageMatrix& b) {
    if (a.tests_ != b.tests_ || a.statements_ != b.statements_) return false;
    for (std::size_t i = 0; i < a.tests_.size(); ++i)
      for (std::size_t j = 0; j < a.statements_.size(); ++j)
        if (a.cell(i, j) != b.cell(i, j)) return false;
    return true;
  }

 private:
  std::size_t require_test(const TestCaseId& t) const {
    auto idx = test_index(t);
    if (!idx) throw SemanticError("unknown test case: " + t.label);
    return *idx;
  }

  std::size_t count_row(std::size_t row) const {
    std::size_t n = 0;
    if (row >= cells_.size()) return 0;
    const auto& r = cells_[row];
    std::size_t limit = std::min(r.size(), statements_.size());
    for (std::size_t j = 0; j < limit; ++j) n += r[j];
    return n;
  }

  void mark_members(const std::vector<StatementId>& ids, std::vector<char>& flags) const {
    std::vector<std::string> unknown;
    for (const auto& id : ids) {
      auto idx = statement_index(id);
      if (idx)
        flags[*idx] = 1;
      else if (std::find(unknown.begin(), unknown.end(), id.label) == unknown.end())
        unknown.push_back(id.label);
    }
    if (!unknown.empty())
      throw SemanticError("unknown statement(s): " + join(unknown, ", "));
  }

  void mark_members(const std::vector<TestCaseId>& ids, std::vector<char>& flags) const {
    std::vector<std::string> unknown;
    for (const auto& id : ids) {
      auto idx = test_index(id);
      if (idx)
        flags[*idx] = 1;
      else if (std::find(unknown.begin(), unknown.end(), id.label) == unknown.end())
        unknown.push_back(id.label);
    }
    if (!unknown.empty())
      throw SemanticError("unknown test case(s): " + join(unknown, ", "));
  }

  void rebuild_index() {
    test_index_.clear();
    statement_index_.clear();
    for (std::size_t i = 0; i < tests_.size(); ++i)
      test_index_.emplace(tests_[i].label, i);  // first occurrence wins
    for (std::size_t j = 0; j < statements_.size(); ++j)
      statement_index_.emplace(statements_[j].label, j);
  }

  std::vector<TestCaseId> tests_;
  std::vector<StatementId> statements_;
  std::vector<std::vector<bool>> cells_;
  std::unordered_map<std::string, std::size_t> test_index_;
  std::unordered_map<std::string, std::size_t> statement_index_;
};

struct ValidationFinding {
  std::string code;    // "duplicate-test-label", "ragged-row", "no-tests", ...
  std::string detail;  // human-readable description

  friend bool operator==(const ValidationFinding&, const ValidationFinding&) = default;
};

struct ValidationReport {
  std::vector<ValidationFinding> errors;
  std::vector<ValidationFinding> warnings;

  bool ok() const { return errors.empty(); }
  bool has_error(std::string_view code) const {
    for (const auto& f : errors)
      if (f.code == code) return true;
    return false;
  }
  bool has_warning(std::string_view code) const {
    for (const auto& f : warnings)
      if (f.code == code) return true;
    return false;
  }
};

/// Structural check; never throws. Duplicate labels and ragged rows are
/// errors, empty axes only warnings (such matrices arise mid-pipeline).
inline ValidationReport validate(const CoverageMatrix& m) {
  ValidationReport report;

  auto find_duplicates = [](const std::vector<std::string>& labels) {
    std::unordered_set<std::string> seen, reported;
    std::vector<std::string> dups;
    for (const auto& l : labels) {
      if (!seen.insert(l).second && reported.insert(l).second) dups.push_back(l);
    }
    return dups;
  };

  for (const auto& label : find_duplicates(labels_of(m.tests())))
    report.errors.push_back({"duplicate-test-label", "duplicate test label: " + label});
  for (const auto& label : find_duplicates(labels_of(m.statements())))
    report.errors.push_back({"duplicate-statement-label", "duplicate statement label: " + label});

  for (std::size_t i = 0; i < m.test_count(); ++i) {
    std::size_t width = m.stored_row_width(i);
    if (width != m.statement_count())
      report.errors.push_back(
          {"ragged-row", "row " + m.tests()[i].label + " has " + std::to_string(width) +
                             " cells, expected " + std::to_string(m.statement_count())});
  }

  if (m.test_count() == 0)
    report.warnings.push_back({"no-tests", "matrix has no test cases"});
  if (m.statement_count() == 0)
    report.warnings.push_back({"no-statements", "matrix has no statements"});
  return report;
}

/// Two disjoint statement sets: removed from the new program version and
/// modified in it. Stored sorted by label with duplicates collapsed, so
/// equal sets compare equal regardless of input order.
class ChangeSet {
 public:
  ChangeSet() = default;

  static ChangeSet of(std::vector<StatementId> deleted, std::vector<StatementId> modified) {
    normalize(deleted);
    normalize(modified);
    std::vector<std::string> overlap;
    for (const auto& d : deleted)
      if (std::binary_search(modified.begin(), modified.end(), d, by_label)) overlap.push_back(d.label);
    if (!overlap.empty())
      throw SemanticError("statement(s) listed as both deleted and modified: " + join(overlap, ", "));
    ChangeSet c;
    c.deleted_ = std::move(deleted);
    c.modified_ = std::move(modified);
    return c;
  }

  const std::vector<StatementId>& deleted() const { return deleted_; }
  const std::vector<StatementId>& modified() const { return modified_; }
  bool empty() const { return deleted_.empty() && modified_.empty(); }

  bool is_deleted(const StatementId& s) const {
    return std::binary_search(deleted_.begin(), deleted_.end(), s, by_label);
  }
  bool is_modified(const StatementId& s) const {
    return std::binary_search(modified_.begin(), modified_.end(), s, by_label);
  }

  friend bool operator==(const ChangeSet&, const ChangeSet&) = default;

 private:
  static bool by_label(const StatementId& a, const StatementId& b) { return a.label < b.label; }

  static void normalize(std::vector<StatementId>& ids) {
    std::sort(ids.begin(), ids.end(), by_label);
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }

  std::vector<StatementId> deleted_;
  std::vector<StatementId> modified_;
};

}  // namespace covsel
