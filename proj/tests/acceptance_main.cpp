// Acceptance gate: one line per criterion, exit code = number of failures.

#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "covsel/covsel.hpp"
#include "oracles.hpp"
#include "proc.hpp"
#include "test_util.hpp"

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kWorkedExampleBudgetSeconds = 1.0;
constexpr double kOracleSweepBudgetSeconds = 60.0;
constexpr double kDegenerateBudgetSeconds = 5.0;
constexpr double kScaleBudgetSeconds = 30.0;

constexpr int kOracleSweepCases = 10000;
constexpr int kInvariantCases = 1000;

const std::string kCli = COVSEL_CLI_PATH;
const std::string kSamples = COVSEL_SAMPLES_DIR;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string ms(double seconds) {
  return std::to_string(static_cast<long>(seconds * 1000.0)) + " ms";
}

std::string cli_command(const std::string& args) {
  return testutil::shell_quote(kCli) + " " + args;
}

std::string worked_args() {
  return "--matrix " + testutil::shell_quote(kSamples + "/matrix.csv") + " --changes " +
         testutil::shell_quote(kSamples + "/changes.txt");
}

bool expect(bool condition, const std::string& message, std::string& detail) {
  if (!condition && detail.empty()) detail = message;
  return condition;
}

// --------------------------------------------------------------------------

bool criterion_worked_example(std::string& detail) {
  auto start = Clock::now();
  auto r = testutil::run_process(cli_command("run --format json " + worked_args()));
  double elapsed = seconds_since(start);
  if (!expect(r.exit_code == 0, "run exited with " + std::to_string(r.exit_code), detail))
    return false;

  auto report = covsel::parse_report_json(r.out);
  bool ok = true;
  ok &= expect(report.out_dated == std::vector<std::string>{"T3", "T11"}, "out_dated cluster differs",
               detail);
  ok &= expect(report.surplus == std::vector<std::string>{"T2", "T7", "T15"},
               "surplus cluster differs", detail);
  ok &= expect(report.required_size == 10, "required size differs", detail);
  ok &= expect(report.order == std::vector<std::string>{"T10", "T1", "T6"}, "order differs", detail);
  std::vector<std::size_t> residuals;
  for (const auto& step : report.trace) residuals.push_back(step.residual);
  ok &= expect(residuals == std::vector<std::size_t>{6, 2, 1}, "residual counts differ", detail);
  ok &= expect(report.uncoverable.empty(), "uncoverable set is not empty", detail);
  ok &= expect(elapsed < kWorkedExampleBudgetSeconds, "took " + ms(elapsed), detail);
  if (ok) detail = ms(elapsed);
  return ok;
}

bool criterion_suite_sizes(std::string& detail) {
  const auto& ex = covsel::builtin_worked_example();
  auto report = covsel::run_pipeline(covsel::parse_matrix_csv(ex.matrix_csv),
                                     covsel::parse_changeset(ex.changes_text));
  bool ok = true;
  ok &= expect(report.original_size == 15 && report.required_size == 10,
               "selection sizes are not 15 -> 10", detail);
  ok &= expect(report.required_size == 10 && report.prioritized_size == 3,
               "prioritization sizes are not 10 -> 3", detail);
  if (ok) detail = "15 -> 10 -> 3";
  return ok;
}

bool criterion_table_goldens(std::string& detail) {
  std::ostringstream sink;
  covsel::run_demo(sink);  // throws GoldenMismatchError on any divergence

  auto r = testutil::run_process(cli_command("demo"));
  bool ok = expect(r.exit_code == 0, "demo exited with " + std::to_string(r.exit_code), detail);
  ok &= expect(r.out == sink.str(), "demo output differs between runs", detail);
  if (ok) detail = "tables 2-10 verified, demo exit 0";
  return ok;
}

bool criterion_oracle_equivalence(std::string& detail) {
  auto start = Clock::now();
  std::mt19937 rng(424242);
  for (int i = 0; i < kOracleSweepCases; ++i) {
    auto c = testutil::random_case(rng, 12, 12);
    auto tag = [&](const char* what) {
      return "case " + std::to_string(i) + ": " + what + " differs from the oracle";
    };

    auto expected = oracle::classify(c.raw, c.deleted, c.modified);
    auto part = covsel::select(testutil::to_matrix(c.raw), testutil::to_changeset(c));
    if (!expect(covsel::labels_of(part.out_dated) == expected.out_dated &&
                    covsel::labels_of(part.surplus) == expected.surplus &&
                    covsel::labels_of(part.required) == expected.required,
                tag("selection"), detail))
      return false;

    auto greedy = oracle::greedy(c.raw);
    auto p = covsel::prioritize(testutil::to_matrix(c.raw));
    if (!expect(covsel::labels_of(p.order) == greedy.order &&
                    covsel::labels_of(p.uncoverable) == greedy.uncoverable &&
                    p.trace.size() == greedy.trace.size(),
                tag("prioritization"), detail))
      return false;
    for (std::size_t k = 0; k < greedy.trace.size(); ++k) {
      if (!expect(p.trace[k].chosen.label == greedy.trace[k].chosen &&
                      p.trace[k].residual_count == greedy.trace[k].residual &&
                      covsel::labels_of(p.trace[k].newly_covered) == greedy.trace[k].newly &&
                      covsel::labels_of(p.trace[k].tied) == greedy.trace[k].tied,
                  tag("trace step"), detail))
        return false;
    }
  }
  double elapsed = seconds_since(start);
  if (!expect(elapsed < kOracleSweepBudgetSeconds, "sweep took " + ms(elapsed), detail)) return false;
  detail = std::to_string(kOracleSweepCases) + " cases in " + ms(elapsed);
  return true;
}

bool criterion_invariants(std::string& detail) {
  std::mt19937 rng(31337);
  for (int i = 0; i < kInvariantCases; ++i) {
    auto c = testutil::random_case(rng, 12, 12);
    auto m = testutil::to_matrix(c.raw);
    auto tag = [&](const char* what) { return "case " + std::to_string(i) + ": " + what; };

    // partition is disjoint and exhaustive
    auto part = covsel::select(m, testutil::to_changeset(c));
    std::vector<std::string> all;
    for (const auto* cluster : {&part.out_dated, &part.surplus, &part.required})
      for (const auto& t : *cluster) all.push_back(t.label);
    auto sorted = all;
    std::sort(sorted.begin(), sorted.end());
    if (!expect(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                tag("clusters overlap"), detail))
      return false;
    auto suite = covsel::labels_of(m.tests());
    std::sort(suite.begin(), suite.end());
    if (!expect(sorted == suite, tag("clusters do not cover the suite"), detail)) return false;

    // greedy dominance, first-index tie-break, strict progress
    auto p = covsel::prioritize(m);
    std::set<std::string> picked;
    std::vector<char> covered(m.statement_count(), 0);
    std::size_t covered_count = 0;
    for (const auto& step : p.trace) {
      std::size_t max_count = 0;
      std::size_t first_max = m.test_count();
      for (std::size_t row = 0; row < m.test_count(); ++row) {
        if (picked.count(m.tests()[row].label)) continue;
        std::size_t count = 0;
        for (std::size_t col = 0; col < m.statement_count(); ++col)
          if (!covered[col] && m.cell(row, col)) ++count;
        if (count > max_count) {
          max_count = count;
          first_max = row;
        }
      }
      if (!expect(step.residual_count == max_count && max_count > 0, tag("pick is not dominant"),
                  detail))
        return false;
      if (!expect(step.chosen == m.tests()[first_max], tag("tie not broken by first index"), detail))
        return false;
      if (!expect(step.newly_covered.size() == step.residual_count, tag("progress is not strict"),
                  detail))
        return false;
      for (const auto& s : step.newly_covered) {
        auto col = m.statement_index(s);
        if (!expect(col && !covered[*col], tag("claimed coverage was already covered"), detail))
          return false;
        covered[*col] = 1;
        ++covered_count;
      }
      picked.insert(step.chosen.label);
    }
    if (!expect(covered_count + p.uncoverable.size() == m.statement_count(),
                tag("uncoverable accounting"), detail))
      return false;

    // coverage curve is monotone within [0, 1]
    auto curve = covsel::coverage_curve(p, m);
    for (std::size_t k = 0; k + 1 < curve.size(); ++k)
      if (!expect(curve[k].fraction <= curve[k + 1].fraction && curve[k + 1].fraction <= 1.0,
                  tag("curve decreases"), detail))
        return false;

    // matrix CSV round-trip identity
    if (!expect(covsel::parse_matrix_csv(covsel::write_matrix_csv(m)) == m,
                tag("CSV round-trip changed the matrix"), detail))
      return false;
  }
  detail = std::to_string(kInvariantCases) + " cases per invariant";
  return true;
}

bool criterion_degenerate(std::string& detail) {
  auto start = Clock::now();
  bool ok = true;

  // adversarial: no statement is covered at all
  std::vector<std::string> zero_rows(200, std::string(500, '0'));
  auto zeros = testutil::make_matrix(zero_rows);
  auto p = covsel::prioritize(zeros);
  ok &= expect(p.order.empty() && p.uncoverable.size() == 500, "all-zero matrix mishandled", detail);

  // half the columns are uncoverable
  std::vector<std::string> half_rows;
  for (int i = 0; i < 100; ++i) {
    std::string row(200, '0');
    for (int j = 0; j < 200; j += 2) row[j] = '1';
    half_rows.push_back(row);
  }
  auto half = testutil::make_matrix(half_rows);
  auto ph = covsel::prioritize(half);
  ok &= expect(ph.uncoverable.size() == 100, "uncoverable set has the wrong size", detail);
  for (const auto& s : ph.uncoverable) {
    auto col = half.statement_index(s);
    ok &= expect(col && *col % 2 == 1, "a coverable statement was called uncoverable", detail);
  }
  ok &= expect(ph.order.size() == 1 && ph.trace[0].residual_count == 100,
               "one test should cover everything coverable", detail);

  // empty matrix, empty axes, empty change set
  auto empty = testutil::make_matrix({}, 0);
  auto re = covsel::run_pipeline(empty, covsel::ChangeSet::of({}, {}));
  ok &= expect(re.original_size == 0 && re.prioritized_size == 0 &&
                   re.coverage_curve == std::vector<covsel::CurvePoint>{{0, 1.0}},
               "empty matrix mishandled", detail);

  auto worked = covsel::parse_matrix_csv(covsel::builtin_worked_example().matrix_csv);
  auto all_required = covsel::select(worked, covsel::ChangeSet::of({}, {}));
  ok &= expect(all_required.required.size() == 15 && all_required.surplus.empty(),
               "empty change set mishandled", detail);

  auto no_mods = covsel::select(worked, covsel::ChangeSet::of({covsel::StatementId{"S1"}}, {}));
  ok &= expect(no_mods.surplus.empty(), "empty modified set must leave surplus empty", detail);

  double elapsed = seconds_since(start);
  ok &= expect(elapsed < kDegenerateBudgetSeconds, "took " + ms(elapsed), detail);
  if (ok) detail = ms(elapsed);
  return ok;
}

bool criterion_scale(std::string& detail) {
  const std::size_t n_tests = 5000, n_statements = 50000, covers_per_test = 100;
  std::mt19937 rng(7777);
  std::uniform_int_distribution<std::size_t> col_dist(0, n_statements - 1);

  std::vector<covsel::TestCaseId> tests;
  std::vector<covsel::StatementId> statements;
  tests.reserve(n_tests);
  statements.reserve(n_statements);
  for (std::size_t i = 0; i < n_tests; ++i) tests.push_back("T" + std::to_string(i + 1));
  for (std::size_t j = 0; j < n_statements; ++j) statements.push_back("S" + std::to_string(j + 1));
  std::vector<std::vector<bool>> cells(n_tests, std::vector<bool>(n_statements, false));
  for (auto& row : cells)
    for (std::size_t k = 0; k < covers_per_test; ++k) row[col_dist(rng)] = true;
  covsel::CoverageMatrix m(std::move(tests), std::move(statements), std::move(cells));

  std::vector<covsel::StatementId> deleted, modified;
  for (std::size_t j = 0; j < 500; ++j) deleted.push_back("S" + std::to_string(j * 100 + 1));
  for (std::size_t j = 0; j < 500; ++j) modified.push_back("S" + std::to_string(j * 100 + 2));
  auto changes = covsel::ChangeSet::of(std::move(deleted), std::move(modified));

  auto start = Clock::now();
  auto report = covsel::run_pipeline(m, changes);
  auto json = covsel::write_report_json(report);
  double elapsed = seconds_since(start);

  bool ok = expect(!json.empty() && report.original_size == n_tests, "report looks wrong", detail);
  ok &= expect(report.out_dated_size + report.surplus_size + report.required_size == n_tests,
               "partition sizes do not add up", detail);
  ok &= expect(elapsed < kScaleBudgetSeconds, "took " + ms(elapsed), detail);
  if (ok)
    detail = std::to_string(n_tests) + "x" + std::to_string(n_statements) + " in " + ms(elapsed);
  return ok;
}

}  // namespace

int main() {
  struct Entry {
    int number;
    const char* name;
    bool (*fn)(std::string&);
  };
  const Entry entries[] = {
      {1, "worked example end-to-end reproduction", criterion_worked_example},
      {2, "suite-size figures 15 -> 10 and 10 -> 3", criterion_suite_sizes},
      {3, "intermediate-table goldens and demo exit", criterion_table_goldens},
      {4, "oracle equivalence on random matrices", criterion_oracle_equivalence},
      {5, "invariant suite over fuzzed cases", criterion_invariants},
      {6, "degenerate and adversarial termination", criterion_degenerate},
      {7, "scale smoke test", criterion_scale},
  };

  int failures = 0;
  for (const auto& entry : entries) {
    std::string detail;
    bool ok = false;
    try {
      ok = entry.fn(detail);
    } catch (const std::exception& e) {
      detail = e.what();
      ok = false;
    }
    std::string line = std::string(ok ? "[PASS]" : "[FAIL]") + " criterion " +
                       std::to_string(entry.number) + ": " + entry.name;
    if (!detail.empty()) line += " (" + detail + ")";
    std::puts(line.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
