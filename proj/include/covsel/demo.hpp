#pragma once

#include <cstddef>
#include <iterator>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "covsel/ingestion.hpp"
#include "covsel/matrix.hpp"
#include "covsel/prioritization.hpp"
#include "covsel/report.hpp"
#include "covsel/selection.hpp"

namespace covsel {

/// The end-to-end worked example the demo replays: a 15-test suite, the
/// change set applied to it, and golden fixtures for every intermediate
/// table and vector the pipeline produces along the way.
struct WorkedExample {
  std::string matrix_csv;
  std::string changes_text;

  std::string table2_csv;  // deleted statements removed
  std::string table4_csv;  // out_dated tests removed
  std::string table5_csv;  // surplus tests removed
  std::string table7_csv;  // after the first pick
  std::string table9_csv;  // after the second pick

  using Counts = std::vector<std::pair<std::string, std::size_t>>;
  Counts table3;   // row sums of table 2
  Counts table6;   // row sums of table 5
  Counts table8;   // row sums of table 7
  Counts table10;  // row sums of table 9

  std::vector<std::string> out_dated;
  std::vector<std::string> surplus;
  std::vector<std::string> required;
  std::vector<std::string> final_order;
};

inline WorkedExample::Counts row_counts(const CoverageMatrix& m) {
  WorkedExample::Counts out;
  out.reserve(m.test_count());
  for (const auto& t : m.tests()) out.emplace_back(t.label, m.row_coverage_count(t));
  return out;
}

inline const WorkedExample& builtin_worked_example() {
  static const WorkedExample ex = [] {
    WorkedExample e;
    e.matrix_csv = R"(,S1,S2,S3,S4,S5,S6,S7,S8,S9,S10,S11,S12,S13,S14,S15
T1,1,0,1,1,1,0,1,1,0,1,1,0,0,0,0
T2,1,0,0,1,0,1,0,1,1,1,0,0,1,0,0
T3,0,0,1,0,0,1,0,0,0,1,0,0,1,0,0
T4,0,1,0,1,0,0,1,1,1,0,0,0,1,1,0
T5,1,0,1,0,1,1,0,0,0,1,0,0,0,1,1
T6,0,1,0,1,0,0,1,0,1,1,1,1,0,0,0
T7,1,0,0,0,1,0,0,0,1,0,0,1,0,1,0
T8,0,1,1,0,0,1,0,0,1,0,1,1,0,0,0
T9,0,0,0,1,1,1,1,0,1,1,0,0,1,0,0
T10,1,1,0,0,0,0,1,1,1,0,0,0,1,1,1
T11,0,0,0,1,0,0,0,1,0,1,0,0,1,0,0
T12,1,1,0,0,1,0,1,0,0,0,0,0,0,0,1
T13,0,1,0,1,0,1,1,1,0,1,0,1,1,1,0
T14,0,1,0,0,0,0,0,0,0,0,0,0,0,0,0
T15,1,0,0,0,1,0,0,0,1,0,1,1,0,0,0
)";
    e.changes_text =
        "deleted: S3 S4 S6 S8 S10 S13\n"
        "modified: S2 S7 S15\n";

    e.table2_csv = R"(,S1,S2,S5,S7,S9,S11,S12,S14,S15
T1,1,0,1,1,0,1,0,0,0
T2,1,0,0,0,1,0,0,0,0
T3,0,0,0,0,0,0,0,0,0
T4,0,1,0,1,1,0,0,1,0
T5,1,0,1,0,0,0,0,1,1
T6,0,1,0,1,1,1,1,0,0
T7,1,0,1,0,1,0,1,1,0
T8,0,1,0,0,1,1,1,0,0
T9,0,0,1,1,1,0,0,0,0
T10,1,1,0,1,1,0,0,1,1
T11,0,0,0,0,0,0,0,0,0
T12,1,1,1,1,0,0,0,0,1
T13,0,1,0,1,0,0,1,1,0
T14,0,1,0,0,0,0,0,0,0
T15,1,0,1,0,1,1,1,0,0
)";
    e.table3 = {{"T1", 4}, {"T2", 2},  {"T3", 0},  {"T4", 4},  {"T5", 4},
                {"T6", 5}, {"T7", 5},  {"T8", 4},  {"T9", 3},  {"T10", 6},
                {"T11", 0}, {"T12", 5}, {"T13", 4}, {"T14", 1}, {"T15", 5}};

    e.table4_csv = R"(,S1,S2,S5,S7,S9,S11,S12,S14,S15
T1,1,0,1,1,0,1,0,0,0
T2,1,0,0,0,1,0,0,0,0
T4,0,1,0,1,1,0,0,1,0
T5,1,0,1,0,0,0,0,1,1
T6,0,1,0,1,1,1,1,0,0
T7,1,0,1,0,1,0,1,1,0
T8,0,1,0,0,1,1,1,0,0
T9,0,0,1,1,1,0,0,0,0
T10,1,1,0,1,1,0,0,1,1
T12,1,1,1,1,0,0,0,0,1
T13,0,1,0,1,0,0,1,1,0
T14,0,1,0,0,0,0,0,0,0
T15,1,0,1,0,1,1,1,0,0
)";

    e.table5_csv = R"(,S1,S2,S5,S7,S9,S11,S12,S14,S15
T1,1,0,1,1,0,1,0,0,0
T4,0,1,0,1,1,0,0,1,0
T5,1,0,1,0,0,0,0,1,1
T6,0,1,0,1,1,1,1,0,0
T8,0,1,0,0,1,1,1,0,0
T9,0,0,1,1,1,0,0,0,0
T10,1,1,0,1,1,0,0,1,1
T12,1,1,1,1,0,0,0,0,1
T13,0,1,0,1,0,0,1,1,0
T14,0,1,0,0,0,0,0,0,0
)";
    e.table6 = {{"T1", 4}, {"T4", 4},  {"T5", 4},  {"T6", 5},  {"T8", 4},
                {"T9", 3}, {"T10", 6}, {"T12", 5}, {"T13", 4}, {"T14", 1}};

    e.table7_csv = R"(,S5,S11,S12
T1,1,1,0
T4,0,0,0
T5,1,0,0
T6,0,1,1
T8,0,1,1
T9,1,0,0
T10,0,0,0
T12,1,0,0
T13,0,0,1
T14,0,0,0
)";
    e.table8 = {{"T1", 2}, {"T4", 0},  {"T5", 1},  {"T6", 2},  {"T8", 2},
                {"T9", 1}, {"T10", 0}, {"T12", 1}, {"T13", 1}, {"T14", 0}};

    e.table9_csv = R"(,S12
T1,0
T4,0
T5,0
T6,1
T8,1
T9,0
T10,0
T12,0
T13,1
T14,0
)";
    e.table10 = {{"T1", 0}, {"T4", 0},  {"T5", 0},  {"T6", 1},  {"T8", 1},
                 {"T9", 0}, {"T10", 0}, {"T12", 0}, {"T13", 1}, {"T14", 0}};

    e.out_dated = {"T3", "T11"};
    e.surplus = {"T2", "T7", "T15"};
    e.required = {"T1", "T4", "T5", "T6", "T8", "T9", "T10", "T12", "T13", "T14"};
    e.final_order = {"T10", "T1", "T6"};
    return e;
  }();
  return ex;
}

namespace demo_detail {

inline std::string joined(const std::vector<std::string>& items) { return join(items, " "); }

inline void check_matrix(const std::string& table, const CoverageMatrix& computed,
                         const CoverageMatrix& golden) {
  if (computed.test_count() != golden.test_count())
    throw GoldenMismatchError(table + ": expected " + std::to_string(golden.test_count()) +
                              " test rows, computed " + std::to_string(computed.test_count()));
  if (computed.statement_count() != golden.statement_count())
    throw GoldenMismatchError(table + ": expected " + std::to_string(golden.statement_count()) +
                              " statement columns, computed " +
                              std::to_string(computed.statement_count()));
  for (std::size_t i = 0; i < golden.test_count(); ++i)
    if (computed.tests()[i] != golden.tests()[i])
      throw GoldenMismatchError(table + ": test label at row " + std::to_string(i + 1) +
                                ": expected " + golden.tests()[i].label + ", computed " +
                                computed.tests()[i].label);
  for (std::size_t j = 0; j < golden.statement_count(); ++j)
    if (computed.statements()[j] != golden.statements()[j])
      throw GoldenMismatchError(table + ": statement label at column " + std::to_string(j + 1) +
                                ": expected " + golden.statements()[j].label + ", computed " +
                                computed.statements()[j].label);
  for (std::size_t i = 0; i < golden.test_count(); ++i)
    for (std::size_t j = 0; j < golden.statement_count(); ++j)
      if (computed.cell(i, j) != golden.cell(i, j))
        throw GoldenMismatchError(table + ": cell (" + golden.tests()[i].label + ", " +
                                  golden.statements()[j].label + "): expected " +
                                  (golden.cell(i, j) ? "1" : "0") + ", computed " +
                                  (computed.cell(i, j) ? "1" : "0"));
}

inline void check_counts(const std::string& table, const WorkedExample::Counts& computed,
                         const WorkedExample::Counts& golden) {
  if (computed.size() != golden.size())
    throw GoldenMismatchError(table + ": expected " + std::to_string(golden.size()) +
                              " rows, computed " + std::to_string(computed.size()));
  for (std::size_t i = 0; i < golden.size(); ++i) {
    if (computed[i].first != golden[i].first)
      throw GoldenMismatchError(table + ": label at row " + std::to_string(i + 1) + ": expected " +
                                golden[i].first + ", computed " + computed[i].first);
    if (computed[i].second != golden[i].second)
      throw GoldenMismatchError(table + ": count for " + golden[i].first + ": expected " +
                                std::to_string(golden[i].second) + ", computed " +
                                std::to_string(computed[i].second));
  }
}

inline void check_labels(const std::string& what, const std::vector<std::string>& computed,
                         const std::vector<std::string>& golden) {
  if (computed != golden)
    throw GoldenMismatchError(what + ": expected {" + joined(golden) + "}, computed {" +
                              joined(computed) + "}");
}

}  // namespace demo_detail

/// Replays the worked example end to end, printing every intermediate table
/// and checking each against its golden fixture before it is shown. Throws
/// GoldenMismatchError naming the first divergence.
inline void run_demo(std::ostream& os, const WorkedExample& ex = builtin_worked_example()) {
  using demo_detail::check_counts;
  using demo_detail::check_labels;
  using demo_detail::check_matrix;
  using demo_detail::joined;

  CoverageMatrix original = parse_matrix_csv(ex.matrix_csv);
  ChangeSet changes = parse_changeset(ex.changes_text);

  os << "Table 1: statement coverage of the full test suite\n" << format_matrix(original) << "\n";
  os << "changes: deleted " << joined(labels_of(changes.deleted())) << "; modified "
     << joined(labels_of(changes.modified())) << "\n\n";

  CoverageMatrix table2 = original.remove_statements(changes.deleted());
  check_matrix("Table 2", table2, parse_matrix_csv(ex.table2_csv));
  os << "Table 2: coverage after removing the deleted statements\n" << format_matrix(table2) << "\n";

  auto table3 = row_counts(table2);
  check_counts("Table 3", table3, ex.table3);
  os << "Table 3: covered statements per test case\n" << format_counts(table3) << "\n";

  SelectionPartition part = select(original, changes);
  check_labels("out_dated cluster", labels_of(part.out_dated), ex.out_dated);
  check_labels("surplus cluster", labels_of(part.surplus), ex.surplus);
  check_labels("required cluster", labels_of(part.required), ex.required);
  os << "out_dated: " << joined(labels_of(part.out_dated)) << "\n";
  os << "surplus: " << joined(labels_of(part.surplus)) << "\n";
  os << "required: " << joined(labels_of(part.required)) << "\n\n";

  CoverageMatrix table4 = table2.remove_tests(part.out_dated);
  check_matrix("Table 4", table4, parse_matrix_csv(ex.table4_csv));
  os << "Table 4: coverage without the out_dated test cases\n" << format_matrix(table4) << "\n";

  const CoverageMatrix& table5 = part.reduced;
  check_matrix("Table 5", table5, parse_matrix_csv(ex.table5_csv));
  os << "Table 5: coverage of the required test cases\n" << format_matrix(table5) << "\n";

  auto table6 = row_counts(table5);
  check_counts("Table 6", table6, ex.table6);
  os << "Table 6: covered statements per required test case\n" << format_counts(table6) << "\n";

  PrioritizedSuite pr = prioritize(table5);

  struct StepTable {
    const char* matrix_name;
    const std::string* matrix_csv;
    const char* counts_name;
    const WorkedExample::Counts* counts;
  };
  const StepTable step_tables[] = {
      {"Table 7", &ex.table7_csv, "Table 8", &ex.table8},
      {"Table 9", &ex.table9_csv, "Table 10", &ex.table10},
  };

  CoverageMatrix remaining = table5;
  for (std::size_t k = 0; k < pr.trace.size(); ++k) {
    const auto& step = pr.trace[k];
    os << "pick " << k + 1 << ": " << step.chosen.label << " covers " << step.residual_count
       << " remaining statement" << (step.residual_count == 1 ? "" : "s") << " ("
       << joined(labels_of(step.newly_covered)) << ")\n\n";
    if (k >= std::size(step_tables)) continue;
    const auto& t = step_tables[k];

    remaining = remaining.remove_statements(step.newly_covered);
    check_matrix(t.matrix_name, remaining, parse_matrix_csv(*t.matrix_csv));
    os << t.matrix_name << ": coverage left after that pick\n" << format_matrix(remaining) << "\n";

    auto counts = row_counts(remaining);
    check_counts(t.counts_name, counts, *t.counts);
    os << t.counts_name << ": covered statements per test case\n" << format_counts(counts) << "\n";
  }

  check_labels("final order", labels_of(pr.order), ex.final_order);
  os << "prioritized order: " << joined(labels_of(pr.order)) << "\n";
  os << "suite size: " << original.test_count() << " -> " << table5.test_count() << " -> "
     << pr.order.size() << "\n";
}

}  // namespace covsel
