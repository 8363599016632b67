#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "covsel/matrix.hpp"

namespace covsel {

/// One greedy iteration: which test was picked, how many still-uncovered
/// statements it contributed, which those were, and which tests were tied
/// for the maximum at that point (the pick itself included).
struct PrioritizationStep {
  TestCaseId chosen;
  std::size_t residual_count = 0;
  std::vector<StatementId> newly_covered;  // column order
  std::vector<TestCaseId> tied;            // row order

  friend bool operator==(const PrioritizationStep&, const PrioritizationStep&) = default;
};

/// Greedy additional-coverage ordering.
///
/// `order` lists only tests that contributed coverage; a test whose
/// residual contribution is zero when its turn would come is simply never
/// chosen. `uncoverable` collects the statements no input test covers at
/// all, which is what forces termination instead of the naive
/// "repeat until every statement is deleted" rule.
struct PrioritizedSuite {
  std::vector<TestCaseId> order;
  std::vector<PrioritizationStep> trace;
  std::vector<StatementId> uncoverable;  // column order

  friend bool operator==(const PrioritizedSuite&, const PrioritizedSuite&) = default;
};

/// Orders tests by greedy additional statement coverage.
///
/// Each iteration counts, for every remaining test, the statements it
/// covers among the remaining columns, picks the maximum, removes the
/// covered columns and the chosen row, and repeats. Ties go to the test
/// with the smallest original row index; the tied candidates are recorded
/// in the trace so other policies can be layered on top. The loop stops
/// when the best residual count is zero or no columns remain.
///
/// Counts are maintained incrementally, which is observably identical to
/// the rescanning formulation (the brute-force oracle in the test suite
/// pins that down).
inline PrioritizedSuite prioritize(const CoverageMatrix& m) {
  const std::size_t n_tests = m.test_count();
  const std::size_t n_statements = m.statement_count();

  std::vector<std::vector<std::uint32_t>> row_cols(n_tests);
  std::vector<std::vector<std::uint32_t>> col_rows(n_statements);
  for (std::size_t i = 0; i < n_tests; ++i) {
    for (std::size_t j = 0; j < n_statements; ++j) {
      if (m.cell(i, j)) {
        row_cols[i].push_back(static_cast<std::uint32_t>(j));
        col_rows[j].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

  std::vector<std::size_t> count(n_tests);
  for (std::size_t i = 0; i < n_tests; ++i) count[i] = row_cols[i].size();
  std::vector<char> row_alive(n_tests, 1);
  std::vector<char> col_alive(n_statements, 1);
  std::size_t cols_left = n_statements;

  PrioritizedSuite result;
  while (cols_left > 0) {
    std::size_t best = n_tests;
    std::size_t best_count = 0;
    for (std::size_t i = 0; i < n_tests; ++i) {
      if (row_alive[i] && count[i] > best_count) {
        best = i;
        best_count = count[i];
      }
    }
    if (best_count == 0) break;

    PrioritizationStep step;
    step.chosen = m.tests()[best];
    step.residual_count = best_count;
    for (std::size_t i = 0; i < n_tests; ++i)
      if (row_alive[i] && count[i] == best_count) step.tied.push_back(m.tests()[i]);

    for (std::uint32_t j : row_cols[best]) {
      if (!col_alive[j]) continue;
      col_alive[j] = 0;
      --cols_left;
      step.newly_covered.push_back(m.statements()[j]);
      for (std::uint32_t i : col_rows[j]) --count[i];
    }
    row_alive[best] = 0;

    result.order.push_back(step.chosen);
    result.trace.push_back(std::move(step));
  }

  for (std::size_t j = 0; j < n_statements; ++j)
    if (col_alive[j]) result.uncoverable.push_back(m.statements()[j]);
  return result;
}

struct CurvePoint {
  std::size_t prefix = 0;   // number of tests taken from the front of the order
  double fraction = 0.0;    // share of the matrix's statements covered so far

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Cumulative coverage as the prioritized order is consumed front to back.
///
/// Point k gives the fraction of all matrix statements covered by the
/// first k tests; the last point equals 1 minus the uncoverable share. An
/// empty statement axis counts as fully covered. Rejects suites that were
/// not produced from this matrix.
inline std::vector<CurvePoint> coverage_curve(const PrioritizedSuite& p, const CoverageMatrix& m) {
  const std::size_t total = m.statement_count();
  auto fraction_of = [total](std::size_t covered) {
    return total == 0 ? 1.0 : static_cast<double>(covered) / static_cast<double>(total);
  };

  std::vector<CurvePoint> curve;
  std::vector<char> covered(total, 0);
  std::size_t covered_count = 0;
  curve.push_back({0, fraction_of(0)});
  for (std::size_t k = 0; k < p.order.size(); ++k) {
    auto row = m.test_index(p.order[k]);
    if (!row)
      throw SemanticError("prioritized suite does not match the matrix: unknown test case " +
                          p.order[k].label);
    for (std::size_t j = 0; j < total; ++j) {
      if (m.cell(*row, j) && !covered[j]) {
        covered[j] = 1;
        ++covered_count;
      }
    }
    curve.push_back({k + 1, fraction_of(covered_count)});
  }

  for (const auto& s : p.uncoverable) {
    auto col = m.statement_index(s);
    if (!col || covered[*col])
      throw SemanticError("prioritized suite does not match the matrix: statement " + s.label +
                          " is not uncoverable here");
  }
  if (covered_count + p.uncoverable.size() != total)
    throw SemanticError("prioritized suite does not match the matrix: coverage accounting is off");
  return curve;
}

struct PrioritizationMetrics {
  std::size_t selected_size = 0;
  std::size_t prioritized_size = 0;
  double reduction = 0.0;  // 1 - prioritized/selected, 0 for an empty selection

  friend bool operator==(const PrioritizationMetrics&, const PrioritizationMetrics&) = default;
};

inline PrioritizationMetrics prioritization_metrics(const PrioritizedSuite& p, std::size_t selected_size) {
  if (selected_size < p.order.size())
    throw SemanticError("selected size " + std::to_string(selected_size) +
                        " is smaller than the prioritized order (" + std::to_string(p.order.size()) +
                        ")");
  PrioritizationMetrics metrics;
  metrics.selected_size = selected_size;
  metrics.prioritized_size = p.order.size();
  if (selected_size > 0)
    metrics.reduction =
        1.0 - static_cast<double>(metrics.prioritized_size) / static_cast<double>(selected_size);
  return metrics;
}

}  // namespace covsel
