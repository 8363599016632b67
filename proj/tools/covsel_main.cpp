#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "covsel/covsel.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw covsel::ParseError("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw covsel::ParseError("cannot read file '" + path + "'");
  return std::move(buf).str();
}

template <typename Fn>
auto in_file(const std::string& path, Fn&& fn) {
  try {
    return fn(slurp(path));
  } catch (const covsel::SemanticError&) {
    throw;
  } catch (const covsel::ParseError& e) {
    throw covsel::ParseError(path + ": " + e.what());
  }
}

struct InputOpts {
  std::string matrix;
  std::string lcov;
  std::string changes;
  std::string diff;
  std::string line_map;
};

struct OutputOpts {
  std::string format = "text";
  std::string chart;
  std::string out;
};

covsel::CoverageMatrix load_matrix(const InputOpts& in, std::vector<std::string>& warnings) {
  if (!in.matrix.empty())
    return in_file(in.matrix, [&](const std::string& text) {
      return covsel::parse_matrix_csv(text, &warnings);
    });

  std::vector<std::pair<std::string, std::string>> records;
  auto manifest_dir = std::filesystem::path(in.lcov).parent_path();
  const std::string manifest_text = slurp(in.lcov);
  for (auto [lineno, raw] : covsel::split_lines(manifest_text)) {
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = covsel::trim(line);
    if (line.empty()) continue;
    auto space = line.find_first_of(" \t");
    if (space == std::string_view::npos)
      throw covsel::ParseError(in.lcov + ": line " + std::to_string(lineno) +
                               ": expected '<test-label> <info-file>'");
    std::string label(covsel::trim(line.substr(0, space)));
    std::filesystem::path path{std::string(covsel::trim(line.substr(space + 1)))};
    if (path.is_relative()) path = manifest_dir / path;
    records.emplace_back(std::move(label), slurp(path.string()));
  }
  try {
    return covsel::import_lcov(records, &warnings);
  } catch (const covsel::ParseError& e) {
    throw covsel::ParseError(in.lcov + ": " + e.what());
  }
}

covsel::ChangeSet load_changes(const InputOpts& in, std::vector<std::string>& warnings) {
  if (!in.changes.empty())
    return in_file(in.changes, [&](const std::string& text) {
      return covsel::parse_changeset(text, &warnings);
    });
  covsel::LineMap map = in_file(in.line_map, [](const std::string& text) {
    return covsel::LineMap::parse(text);
  });
  return in_file(in.diff, [&](const std::string& text) {
    return covsel::derive_changeset_from_diff(text, map, &warnings);
  });
}

covsel::ChartKind chart_for(const OutputOpts& o, covsel::ChartKind fallback) {
  if (o.chart == "selection") return covsel::ChartKind::Selection;
  if (o.chart == "prioritization") return covsel::ChartKind::Prioritization;
  return fallback;
}

int finish(const covsel::SuiteReport& r, const OutputOpts& o, covsel::ChartKind fallback) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";

  std::string payload;
  if (o.format == "json")
    payload = covsel::write_report_json(r);
  else if (o.format == "csv")
    payload = covsel::write_report_csv(r);
  else if (o.format == "svg")
    payload = covsel::emit_svg_bars(r, chart_for(o, fallback));
  else
    payload = covsel::write_report_text(r);

  if (o.out.empty()) {
    std::cout << payload;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    f << payload;
    f.flush();
    if (!f) throw covsel::Error("cannot write file '" + o.out + "'");
  }
  return 0;
}

void add_matrix_source(CLI::App* cmd, InputOpts& in) {
  auto* src = cmd->add_option_group("matrix source")->require_option(1);
  src->add_option("--matrix", in.matrix, "coverage matrix CSV file");
  src->add_option("--lcov", in.lcov, "manifest of '<test-label> <lcov-info-file>' lines");
}

void add_change_source(CLI::App* cmd, InputOpts& in) {
  auto* line_map = cmd->add_option("--line-map", in.line_map,
                                   "statement/line mapping used with --diff");
  auto* src = cmd->add_option_group("change source")->require_option(1);
  src->add_option("--changes", in.changes, "change specification file");
  auto* diff = src->add_option("--diff", in.diff, "unified diff to derive the change set from");
  diff->needs(line_map);
  line_map->needs(diff);
}

void add_output(CLI::App* cmd, OutputOpts& o) {
  cmd->add_option("--format", o.format, "report format")
      ->check(CLI::IsMember({"text", "json", "csv", "svg"}));
  cmd->add_option("--out", o.out, "write the report to this file instead of stdout");
  cmd->add_option("--chart", o.chart, "which sizes an SVG chart plots")
      ->check(CLI::IsMember({"selection", "prioritization"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selects and prioritizes regression test cases from statement coverage."};
  app.require_subcommand(1);

  InputOpts sel_in, pri_in, run_in;
  OutputOpts sel_out, pri_out, run_out;
  covsel::RunOptions pri_opts, run_opts;

  auto* sel = app.add_subcommand("select", "Drop out-dated and surplus test cases for a change set");
  add_matrix_source(sel, sel_in);
  add_change_source(sel, sel_in);
  add_output(sel, sel_out);

  auto* pri = app.add_subcommand("prioritize", "Order test cases by additional statement coverage");
  add_matrix_source(pri, pri_in);
  add_output(pri, pri_out);
  pri->add_flag("--append-unchosen", pri_opts.append_unchosen,
                "append tests the greedy pass never picked, marked zero-contribution");

  auto* run = app.add_subcommand("run", "Select for a change set, then prioritize the survivors");
  add_matrix_source(run, run_in);
  add_change_source(run, run_in);
  add_output(run, run_out);
  run->add_flag("--append-unchosen", run_opts.append_unchosen,
                "append tests the greedy pass never picked, marked zero-contribution");

  auto* demo = app.add_subcommand("demo", "Replay the built-in worked example and verify it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sel) {
      std::vector<std::string> warnings;
      auto m = load_matrix(sel_in, warnings);
      auto c = load_changes(sel_in, warnings);
      return finish(covsel::run_selection(m, c, std::move(warnings)), sel_out,
                    covsel::ChartKind::Selection);
    }
    if (*pri) {
      std::vector<std::string> warnings;
      auto m = load_matrix(pri_in, warnings);
      return finish(covsel::run_prioritization(m, pri_opts, std::move(warnings)), pri_out,
                    covsel::ChartKind::Prioritization);
    }
    if (*run) {
      std::vector<std::string> warnings;
      auto m = load_matrix(run_in, warnings);
      auto c = load_changes(run_in, warnings);
      return finish(covsel::run_pipeline(m, c, run_opts, std::move(warnings)), run_out,
                    covsel::ChartKind::Prioritization);
    }
    if (*demo) {
      covsel::run_demo(std::cout);
      return 0;
    }
  } catch (const covsel::GoldenMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const covsel::SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const covsel::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
