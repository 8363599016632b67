#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "covsel/matrix.hpp"

namespace covsel {

/// The three change-driven clusters plus the matrix the prioritizer runs on.
///
/// After the deleted columns are dropped:
///   out_dated — tests covering no surviving statement at all,
///   surplus   — tests covering surviving statements but none of the
///               modified ones,
///   required  — tests covering at least one modified statement.
/// The three lists are disjoint, exhaust the suite, and keep the original
/// row order. `reduced` holds exactly the required rows over the surviving
/// columns.
struct SelectionPartition {
  std::vector<TestCaseId> out_dated;
  std::vector<TestCaseId> surplus;
  std::vector<TestCaseId> required;
  CoverageMatrix reduced;
  /// Modified statements no required test covers; callers surface these as
  /// warnings since such a change ships without any selected test touching it.
  std::vector<StatementId> modified_uncovered;
};

/// Partitions the suite for a change set.
///
/// Zero-coverage rows are classified before the modified-statement filter
/// runs, so a test covering only deleted statements is out-dated, not
/// surplus. An empty modified set disables the surplus filter entirely:
/// with nothing modified there is no modification-targeting rule to apply,
/// and every test that still covers something stays required.
inline SelectionPartition select(const CoverageMatrix& m, const ChangeSet& c) {
  std::vector<std::string> unknown;
  auto check_known = [&](const std::vector<StatementId>& ids) {
    for (const auto& s : ids)
      if (!m.statement_index(s)) unknown.push_back(s.label);
  };
  check_known(c.deleted());
  check_known(c.modified());
  if (!unknown.empty())
    throw SemanticError("change set references unknown statement(s): " + join(unknown, ", "));

  CoverageMatrix pruned = m.remove_statements(c.deleted());

  std::vector<std::size_t> modified_cols;
  for (const auto& s : c.modified()) modified_cols.push_back(*pruned.statement_index(s));
  std::sort(modified_cols.begin(), modified_cols.end());

  SelectionPartition part;
  std::vector<TestCaseId> not_required;
  std::vector<char> required_row(pruned.test_count(), 0);
  for (std::size_t i = 0; i < pruned.test_count(); ++i) {
    std::size_t covered = 0;
    for (std::size_t j = 0; j < pruned.statement_count(); ++j) covered += pruned.cell(i, j);
    bool touches_modified = false;
    for (std::size_t j : modified_cols)
      if (pruned.cell(i, j)) {
        touches_modified = true;
        break;
      }

    if (covered == 0) {
      part.out_dated.push_back(pruned.tests()[i]);
      not_required.push_back(pruned.tests()[i]);
    } else if (!c.modified().empty() && !touches_modified) {
      part.surplus.push_back(pruned.tests()[i]);
      not_required.push_back(pruned.tests()[i]);
    } else {
      part.required.push_back(pruned.tests()[i]);
      required_row[i] = 1;
    }
  }
  part.reduced = pruned.remove_tests(not_required);

  for (std::size_t j : modified_cols) {
    bool covered = false;
    for (std::size_t i = 0; i < pruned.test_count() && !covered; ++i)
      covered = required_row[i] && pruned.cell(i, j);
    if (!covered) part.modified_uncovered.push_back(pruned.statements()[j]);
  }
  return part;
}

struct SelectionMetrics {
  std::size_t original_size = 0;
  std::size_t out_dated_size = 0;
  std::size_t surplus_size = 0;
  std::size_t required_size = 0;
  double reduction = 0.0;  // 1 - required/original, 0 for an empty suite

  friend bool operator==(const SelectionMetrics&, const SelectionMetrics&) = default;
};

/// Size bookkeeping for a partition; rejects partitions that do not cover
/// the original suite exactly.
inline SelectionMetrics selection_metrics(const SelectionPartition& p, const CoverageMatrix& original) {
  std::vector<std::string> clustered = labels_of(p.out_dated);
  {
    auto s = labels_of(p.surplus);
    clustered.insert(clustered.end(), s.begin(), s.end());
    auto r = labels_of(p.required);
    clustered.insert(clustered.end(), r.begin(), r.end());
  }
  std::vector<std::string> suite = labels_of(original.tests());
  std::sort(clustered.begin(), clustered.end());
  std::sort(suite.begin(), suite.end());
  if (clustered != suite)
    throw SemanticError("selection partition does not match the original suite");

  SelectionMetrics metrics;
  metrics.original_size = original.test_count();
  metrics.out_dated_size = p.out_dated.size();
  metrics.surplus_size = p.surplus.size();
  metrics.required_size = p.required.size();
  if (metrics.original_size > 0)
    metrics.reduction =
        1.0 - static_cast<double>(metrics.required_size) / static_cast<double>(metrics.original_size);
  return metrics;
}

}  // namespace covsel
