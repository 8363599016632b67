#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "covsel/matrix.hpp"
#include "covsel/prioritization.hpp"
#include "covsel/report.hpp"
#include "covsel/selection.hpp"

namespace covsel {

struct RunOptions {
  bool append_unchosen = false;
};

namespace pipeline_detail {

inline std::string summarize(const std::vector<StatementId>& ids, std::size_t cap = 20) {
  std::string out;
  std::size_t shown = std::min(cap, ids.size());
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) out += ' ';
    out += ids[i].label;
  }
  if (ids.size() > cap) out += " (and " + std::to_string(ids.size() - cap) + " more)";
  return out;
}

}  // namespace pipeline_detail

inline SuiteReport make_selection_report(const CoverageMatrix& original, const SelectionPartition& part,
                                         std::vector<std::string> warnings = {}) {
  SelectionMetrics metrics = selection_metrics(part, original);

  SuiteReport r;
  r.warnings = std::move(warnings);
  r.has_selection = true;
  r.original_size = metrics.original_size;
  r.out_dated_size = metrics.out_dated_size;
  r.surplus_size = metrics.surplus_size;
  r.required_size = metrics.required_size;
  r.out_dated = labels_of(part.out_dated);
  r.surplus = labels_of(part.surplus);
  r.required = labels_of(part.required);
  if (!part.modified_uncovered.empty())
    r.warnings.push_back("modified statement(s) not covered by any required test: " +
                         pipeline_detail::summarize(part.modified_uncovered));
  return r;
}

/// Fills the prioritization side of a report from a greedy result over
/// `suite` (the matrix the order was computed on). With append_unchosen the
/// tests the greedy loop never picked follow the computed order in their
/// original row order and are listed as zero-contribution; prioritized_size
/// counts the full emitted order either way.
inline void attach_prioritization(SuiteReport& r, const CoverageMatrix& suite, const PrioritizedSuite& p,
                                  const RunOptions& opts = {}) {
  r.has_prioritization = true;
  r.order = labels_of(p.order);
  for (std::size_t i = 0; i < p.trace.size(); ++i) {
    const auto& s = p.trace[i];
    TraceStepRecord rec;
    rec.step = i + 1;
    rec.chosen = s.chosen.label;
    rec.residual = s.residual_count;
    rec.newly_covered = labels_of(s.newly_covered);
    rec.tied = labels_of(s.tied);
    r.trace.push_back(std::move(rec));
  }
  for (const auto& point : coverage_curve(p, suite)) r.coverage_curve.push_back(point);
  r.uncoverable = labels_of(p.uncoverable);

  if (p.order.empty() && suite.test_count() > 0 && suite.statement_count() > 0)
    r.warnings.push_back("no test case covers any statement; the computed order is empty");

  if (opts.append_unchosen) {
    std::unordered_set<std::string> chosen(r.order.begin(), r.order.end());
    for (const auto& t : suite.tests()) {
      if (chosen.count(t.label)) continue;
      r.zero_contribution.push_back(t.label);
      r.order.push_back(t.label);
    }
  }
  r.prioritized_size = r.order.size();
}

inline SuiteReport run_selection(const CoverageMatrix& m, const ChangeSet& c,
                                 std::vector<std::string> warnings = {}) {
  SelectionPartition part = select(m, c);
  return make_selection_report(m, part, std::move(warnings));
}

inline SuiteReport run_prioritization(const CoverageMatrix& m, const RunOptions& opts = {},
                                      std::vector<std::string> warnings = {}) {
  SuiteReport r;
  r.warnings = std::move(warnings);
  r.original_size = m.test_count();
  r.required_size = m.test_count();
  r.required = labels_of(m.tests());
  attach_prioritization(r, m, prioritize(m), opts);
  return r;
}

inline SuiteReport run_pipeline(const CoverageMatrix& m, const ChangeSet& c, const RunOptions& opts = {},
                                std::vector<std::string> warnings = {}) {
  SelectionPartition part = select(m, c);
  SuiteReport r = make_selection_report(m, part, std::move(warnings));
  attach_prioritization(r, part.reduced, prioritize(part.reduced), opts);
  return r;
}

}  // namespace covsel
