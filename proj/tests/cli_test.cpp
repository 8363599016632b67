#include <catch2/catch_amalgamated.hpp>

#include "covsel/demo.hpp"
#include "covsel/ingestion.hpp"
#include "covsel/pipeline.hpp"
#include "covsel/report.hpp"
#include "proc.hpp"
#include "test_util.hpp"

using testutil::run_process;
using testutil::shell_quote;
using testutil::TempDir;

namespace {

const std::string kCli = COVSEL_CLI_PATH;
const std::string kSamples = COVSEL_SAMPLES_DIR;

std::string cli(const std::string& args) { return shell_quote(kCli) + " " + args; }

std::string sample_path(const std::string& name) { return shell_quote(kSamples + "/" + name); }

std::string worked_args() {
  return "--matrix " + sample_path("matrix.csv") + " --changes " + sample_path("changes.txt");
}

}  // namespace

TEST_CASE("run on the worked example prints the expected summary") {
  auto r = run_process(cli("run " + worked_args()));
  REQUIRE(r.exit_code == 0);
  CHECK(r.err.empty());
  CHECK(r.out.find("out_dated (2): T3 T11") != std::string::npos);
  CHECK(r.out.find("order (3): T10 T1 T6") != std::string::npos);
  CHECK(r.out.find("size: 15 -> 10") != std::string::npos);
  CHECK(r.out.find("size: 10 -> 3") != std::string::npos);
}

TEST_CASE("json output matches the in-process pipeline") {
  auto r = run_process(cli("run --format json " + worked_args()));
  REQUIRE(r.exit_code == 0);
  auto report = covsel::parse_report_json(r.out);

  const auto& ex = covsel::builtin_worked_example();
  auto expected = covsel::run_pipeline(covsel::parse_matrix_csv(ex.matrix_csv),
                                       covsel::parse_changeset(ex.changes_text));
  CHECK(report == expected);
}

TEST_CASE("csv output matches the json output") {
  auto csv = run_process(cli("run --format csv " + worked_args()));
  auto json = run_process(cli("run --format json " + worked_args()));
  REQUIRE(csv.exit_code == 0);
  REQUIRE(json.exit_code == 0);
  CHECK(covsel::parse_report_csv(csv.out) == covsel::parse_report_json(json.out));
}

TEST_CASE("repeated runs are byte-identical") {
  for (const char* format : {"text", "json", "csv", "svg"}) {
    auto a = run_process(cli("run --format " + std::string(format) + " " + worked_args()));
    auto b = run_process(cli("run --format " + std::string(format) + " " + worked_args()));
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("run composes select and prioritize") {
  TempDir dir;
  auto select = run_process(cli("select --format json " + worked_args()));
  REQUIRE(select.exit_code == 0);
  auto selected = covsel::parse_report_json(select.out);
  CHECK(selected.has_selection);
  CHECK_FALSE(selected.has_prioritization);
  CHECK(selected.required_size == 10);

  // the reduced matrix the selection step leaves behind
  auto reduced = dir.file("reduced.csv", covsel::builtin_worked_example().table5_csv);
  auto pri = run_process(cli("prioritize --format json --matrix " + shell_quote(reduced)));
  REQUIRE(pri.exit_code == 0);
  auto prioritized = covsel::parse_report_json(pri.out);

  auto run = run_process(cli("run --format json " + worked_args()));
  REQUIRE(run.exit_code == 0);
  auto piped = covsel::parse_report_json(run.out);

  CHECK(piped.order == prioritized.order);
  CHECK(piped.trace == prioritized.trace);
  CHECK(piped.coverage_curve == prioritized.coverage_curve);
  CHECK(piped.uncoverable == prioritized.uncoverable);
  CHECK(piped.prioritized_size == prioritized.prioritized_size);
  CHECK(piped.out_dated == selected.out_dated);
  CHECK(piped.surplus == selected.surplus);
  CHECK(piped.required == selected.required);
}

TEST_CASE("diff input is equivalent to the change spec") {
  auto via_changes = run_process(cli("run --format json " + worked_args()));
  auto via_diff = run_process(cli("run --format json --matrix " + sample_path("matrix.csv") +
                                  " --diff " + sample_path("api.diff") + " --line-map " +
                                  sample_path("line-map.txt")));
  REQUIRE(via_changes.exit_code == 0);
  REQUIRE(via_diff.exit_code == 0);
  CHECK(via_changes.out == via_diff.out);
}

TEST_CASE("prioritize accepts an lcov manifest") {
  auto r = run_process(cli("prioritize --format json --lcov " + sample_path("lcov/manifest.txt")));
  REQUIRE(r.exit_code == 0);
  auto report = covsel::parse_report_json(r.out);
  CHECK(report.order == std::vector<std::string>{"alpha", "beta"});
  CHECK(report.original_size == 3);
  CHECK(report.uncoverable.empty());
}

TEST_CASE("append-unchosen flag flows through") {
  auto r = run_process(cli("run --format json --append-unchosen " + worked_args()));
  REQUIRE(r.exit_code == 0);
  auto report = covsel::parse_report_json(r.out);
  CHECK(report.order == std::vector<std::string>{"T10", "T1", "T6", "T4", "T5", "T8", "T9", "T12",
                                                 "T13", "T14"});
  CHECK(report.zero_contribution ==
        std::vector<std::string>{"T4", "T5", "T8", "T9", "T12", "T13", "T14"});
}

TEST_CASE("--out writes the report to a file and keeps stdout clean") {
  TempDir dir;
  auto out = dir.path() / "report.json";
  auto r = run_process(cli("run --format json --out " + shell_quote(out.string()) + " " +
                           worked_args()));
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  auto direct = run_process(cli("run --format json " + worked_args()));
  CHECK(testutil::read_file(out.string()) == direct.out);
}

TEST_CASE("svg output honors the chart flag") {
  auto selection = run_process(cli("run --format svg --chart selection " + worked_args()));
  REQUIRE(selection.exit_code == 0);
  CHECK(selection.out.find("Test suite size after selection") != std::string::npos);

  auto by_default = run_process(cli("run --format svg " + worked_args()));
  REQUIRE(by_default.exit_code == 0);
  CHECK(by_default.out.find("Test suite size after prioritization") != std::string::npos);

  auto invalid = run_process(cli("prioritize --format svg --chart selection --matrix " +
                                 sample_path("matrix.csv")));
  CHECK(invalid.exit_code == 3);
  CHECK(invalid.err.find("no selection data") != std::string::npos);
}

TEST_CASE("demo exits clean and reproduces the tables") {
  auto r = run_process(cli("demo"));
  REQUIRE(r.exit_code == 0);
  CHECK(r.err.empty());
  CHECK(r.out.find("Table 10") != std::string::npos);
  CHECK(r.out.find("suite size: 15 -> 10 -> 3") != std::string::npos);
  CHECK(r.out == run_process(cli("demo")).out);
}

TEST_CASE("parse failures exit 2") {
  TempDir dir;
  auto bad = dir.file("bad.csv", ",S1\nT1,2\n");
  auto r = run_process(cli("run --matrix " + shell_quote(bad) + " --changes " +
                           sample_path("changes.txt")));
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("expected 0 or 1") != std::string::npos);

  auto missing = run_process(cli("run --matrix /nonexistent.csv --changes " +
                                 sample_path("changes.txt")));
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.find("cannot read file") != std::string::npos);
}

TEST_CASE("semantic failures exit 3") {
  TempDir dir;
  auto unknown = dir.file("unknown.txt", "deleted: S99\n");
  auto r = run_process(cli("run --matrix " + sample_path("matrix.csv") + " --changes " +
                           shell_quote(unknown)));
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("S99") != std::string::npos);

  auto overlap = dir.file("overlap.txt", "deleted: S1\nmodified: S1\n");
  auto o = run_process(cli("select --matrix " + sample_path("matrix.csv") + " --changes " +
                           shell_quote(overlap)));
  CHECK(o.exit_code == 3);
  CHECK(o.err.find("both deleted and modified") != std::string::npos);
}

TEST_CASE("usage problems exit 1") {
  CHECK(run_process(cli("")).exit_code == 1);
  CHECK(run_process(cli("select --changes " + sample_path("changes.txt"))).exit_code == 1);
  CHECK(run_process(cli("run --matrix " + sample_path("matrix.csv") + " --lcov " +
                        sample_path("lcov/manifest.txt") + " --changes " +
                        sample_path("changes.txt")))
            .exit_code == 1);
  CHECK(run_process(cli("run --matrix " + sample_path("matrix.csv") + " --diff " +
                        sample_path("api.diff")))
            .exit_code == 1);
  CHECK(run_process(cli("run --format yaml " + worked_args())).exit_code == 1);
  CHECK(run_process(cli("--help")).exit_code == 0);
}

TEST_CASE("warnings go to stderr and stay in the report") {
  TempDir dir;
  auto empty = dir.file("empty.csv", "\n");
  auto r = run_process(cli("prioritize --format json --matrix " + shell_quote(empty)));
  REQUIRE(r.exit_code == 0);
  CHECK(r.err.find("warning: matrix has no test cases") != std::string::npos);
  auto report = covsel::parse_report_json(r.out);
  REQUIRE(report.warnings.size() == 2);
}
