#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "covsel/matrix.hpp"
#include "covsel/prioritization.hpp"

namespace covsel {

inline constexpr std::string_view kReportSchema = "covsel-report-v1";

struct TraceStepRecord {
  std::size_t step = 0;  // 1-based
  std::string chosen;
  std::size_t residual = 0;
  std::vector<std::string> newly_covered;
  std::vector<std::string> tied;

  friend bool operator==(const TraceStepRecord&, const TraceStepRecord&) = default;
};

/// Everything a command run produces, in one serializable value.
/// Selection-only reports leave the prioritization fields empty and vice
/// versa; the has_* flags record which stages actually ran.
struct SuiteReport {
  bool has_selection = false;
  bool has_prioritization = false;

  std::size_t original_size = 0;
  std::size_t out_dated_size = 0;
  std::size_t surplus_size = 0;
  std::size_t required_size = 0;
  std::size_t prioritized_size = 0;

  std::vector<std::string> out_dated;
  std::vector<std::string> surplus;
  std::vector<std::string> required;

  std::vector<std::string> order;
  std::vector<std::string> zero_contribution;
  std::vector<TraceStepRecord> trace;
  std::vector<CurvePoint> coverage_curve;
  std::vector<std::string> uncoverable;

  std::vector<std::string> warnings;

  friend bool operator==(const SuiteReport&, const SuiteReport&) = default;
};

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json report_to_json(const SuiteReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["has_selection"] = r.has_selection;
  j["has_prioritization"] = r.has_prioritization;
  j["original_size"] = r.original_size;
  j["out_dated_size"] = r.out_dated_size;
  j["surplus_size"] = r.surplus_size;
  j["required_size"] = r.required_size;
  j["prioritized_size"] = r.prioritized_size;
  j["clusters"] = {{"out_dated", r.out_dated}, {"surplus", r.surplus}, {"required", r.required}};
  j["order"] = r.order;
  j["zero_contribution"] = r.zero_contribution;
  j["trace"] = nlohmann::ordered_json::array();
  for (const auto& t : r.trace)
    j["trace"].push_back({{"step", t.step},
                          {"chosen", t.chosen},
                          {"residual", t.residual},
                          {"newly_covered", t.newly_covered},
                          {"tied", t.tied}});
  j["coverage_curve"] = nlohmann::ordered_json::array();
  for (const auto& p : r.coverage_curve)
    j["coverage_curve"].push_back({{"prefix", p.prefix}, {"fraction", p.fraction}});
  j["uncoverable"] = r.uncoverable;
  j["warnings"] = r.warnings;
  return j;
}

inline std::string write_report_json(const SuiteReport& r) { return report_to_json(r).dump(2) + "\n"; }

namespace report_detail {

inline const nlohmann::ordered_json& require(const nlohmann::ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("report is missing field '") + key + "'");
  return *it;
}

template <typename T>
inline T as(const nlohmann::ordered_json& j, const char* key) {
  try {
    return require(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report field '") + key + "' has the wrong type: " + e.what());
  }
}

}  // namespace report_detail

inline SuiteReport report_from_json(const nlohmann::ordered_json& j) {
  using report_detail::as;
  using report_detail::require;

  if (!j.is_object()) throw ParseError("report must be a JSON object");
  if (as<std::string>(j, "schema") != kReportSchema)
    throw ParseError("unsupported report schema '" + as<std::string>(j, "schema") + "'");

  SuiteReport r;
  r.has_selection = as<bool>(j, "has_selection");
  r.has_prioritization = as<bool>(j, "has_prioritization");
  r.original_size = as<std::size_t>(j, "original_size");
  r.out_dated_size = as<std::size_t>(j, "out_dated_size");
  r.surplus_size = as<std::size_t>(j, "surplus_size");
  r.required_size = as<std::size_t>(j, "required_size");
  r.prioritized_size = as<std::size_t>(j, "prioritized_size");

  const auto& clusters = require(j, "clusters");
  r.out_dated = as<std::vector<std::string>>(clusters, "out_dated");
  r.surplus = as<std::vector<std::string>>(clusters, "surplus");
  r.required = as<std::vector<std::string>>(clusters, "required");

  r.order = as<std::vector<std::string>>(j, "order");
  r.zero_contribution = as<std::vector<std::string>>(j, "zero_contribution");

  for (const auto& t : require(j, "trace")) {
    TraceStepRecord rec;
    rec.step = as<std::size_t>(t, "step");
    rec.chosen = as<std::string>(t, "chosen");
    rec.residual = as<std::size_t>(t, "residual");
    rec.newly_covered = as<std::vector<std::string>>(t, "newly_covered");
    rec.tied = as<std::vector<std::string>>(t, "tied");
    r.trace.push_back(std::move(rec));
  }
  for (const auto& p : require(j, "coverage_curve"))
    r.coverage_curve.push_back({as<std::size_t>(p, "prefix"), as<double>(p, "fraction")});

  r.uncoverable = as<std::vector<std::string>>(j, "uncoverable");
  r.warnings = as<std::vector<std::string>>(j, "warnings");
  return r;
}

inline SuiteReport parse_report_json(std::string_view text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return report_from_json(j);
}

// ---------------------------------------------------------------------------
// CSV
//
// Long format, one fact per row: `record,key,value`. Keys are cluster names,
// 1-based positions, or curve prefixes depending on the record. Values that
// contain a comma, quote, or newline are quoted RFC-4180 style; everything
// the library itself generates stays unquoted.
// ---------------------------------------------------------------------------

namespace report_detail {

inline std::string csv_quote(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::vector<std::string> csv_fields(std::string_view line, std::size_t lineno) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"' && current.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (quoted) throw ParseError("line " + std::to_string(lineno) + ": unterminated quoted field");
  fields.push_back(std::move(current));
  return fields;
}

inline std::string join_labels(const std::vector<std::string>& labels) { return join(labels, " "); }

}  // namespace report_detail

inline std::string write_report_csv(const SuiteReport& r) {
  using report_detail::csv_quote;
  using report_detail::join_labels;
  std::string out = "record,key,value\n";
  auto row = [&](std::string_view record, std::string_view key, std::string_view value) {
    out += record;
    out += ',';
    out += csv_quote(key);
    out += ',';
    out += csv_quote(value);
    out += '\n';
  };

  row("schema", "", kReportSchema);
  row("stage", "selection", r.has_selection ? "1" : "0");
  row("stage", "prioritization", r.has_prioritization ? "1" : "0");
  row("size", "original", std::to_string(r.original_size));
  row("size", "out_dated", std::to_string(r.out_dated_size));
  row("size", "surplus", std::to_string(r.surplus_size));
  row("size", "required", std::to_string(r.required_size));
  row("size", "prioritized", std::to_string(r.prioritized_size));
  for (const auto& t : r.out_dated) row("cluster", "out_dated", t);
  for (const auto& t : r.surplus) row("cluster", "surplus", t);
  for (const auto& t : r.required) row("cluster", "required", t);
  for (std::size_t i = 0; i < r.order.size(); ++i) row("order", std::to_string(i + 1), r.order[i]);
  for (std::size_t i = 0; i < r.zero_contribution.size(); ++i)
    row("zero_contribution", std::to_string(i + 1), r.zero_contribution[i]);
  for (const auto& t : r.trace) {
    auto key = std::to_string(t.step);
    row("trace_chosen", key, t.chosen);
    row("trace_residual", key, std::to_string(t.residual));
    row("trace_new", key, join_labels(t.newly_covered));
    row("trace_tied", key, join_labels(t.tied));
  }
  for (const auto& p : r.coverage_curve) row("curve", std::to_string(p.prefix), format_double(p.fraction));
  for (std::size_t i = 0; i < r.uncoverable.size(); ++i)
    row("uncoverable", std::to_string(i + 1), r.uncoverable[i]);
  for (std::size_t i = 0; i < r.warnings.size(); ++i) {
    std::string text = r.warnings[i];
    for (char& c : text)
      if (c == '\n' || c == '\r') c = ' ';
    row("warning", std::to_string(i + 1), text);
  }
  return out;
}

inline SuiteReport parse_report_csv(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0].second) != "record,key,value")
    throw ParseError("report CSV must start with the header 'record,key,value'");

  SuiteReport r;
  bool saw_schema = false;
  std::map<std::size_t, TraceStepRecord> trace;

  auto position = [](const std::string& key, std::size_t lineno) {
    auto v = parse_long(key);
    if (!v || *v <= 0)
      throw ParseError("line " + std::to_string(lineno) + ": key must be a positive index, got '" +
                       key + "'");
    return static_cast<std::size_t>(*v);
  };
  auto count = [](const std::string& value, std::size_t lineno) {
    auto v = parse_long(value);
    if (!v || *v < 0)
      throw ParseError("line " + std::to_string(lineno) + ": expected a non-negative count, got '" +
                       value + "'");
    return static_cast<std::size_t>(*v);
  };
  auto flag = [](const std::string& value, std::size_t lineno) {
    if (value == "1") return true;
    if (value == "0") return false;
    throw ParseError("line " + std::to_string(lineno) + ": expected 0 or 1, got '" + value + "'");
  };
  auto labels = [](const std::string& value) {
    std::vector<std::string> out;
    for (auto token : split_whitespace(value)) out.emplace_back(token);
    return out;
  };

  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto [lineno, line] = lines[i];
    if (trim(line).empty()) continue;
    auto fields = report_detail::csv_fields(line, lineno);
    if (fields.size() != 3)
      throw ParseError("line " + std::to_string(lineno) + ": expected 3 fields, got " +
                       std::to_string(fields.size()));
    const auto& record = fields[0];
    const auto& key = fields[1];
    const auto& value = fields[2];

    if (record == "schema") {
      if (value != kReportSchema) throw ParseError("unsupported report schema '" + value + "'");
      saw_schema = true;
    } else if (record == "stage") {
      if (key == "selection")
        r.has_selection = flag(value, lineno);
      else if (key == "prioritization")
        r.has_prioritization = flag(value, lineno);
      else
        throw ParseError("line " + std::to_string(lineno) + ": unknown stage '" + key + "'");
    } else if (record == "size") {
      if (key == "original")
        r.original_size = count(value, lineno);
      else if (key == "out_dated")
        r.out_dated_size = count(value, lineno);
      else if (key == "surplus")
        r.surplus_size = count(value, lineno);
      else if (key == "required")
        r.required_size = count(value, lineno);
      else if (key == "prioritized")
        r.prioritized_size = count(value, lineno);
      else
        throw ParseError("line " + std::to_string(lineno) + ": unknown size '" + key + "'");
    } else if (record == "cluster") {
      if (key == "out_dated")
        r.out_dated.push_back(value);
      else if (key == "surplus")
        r.surplus.push_back(value);
      else if (key == "required")
        r.required.push_back(value);
      else
        throw ParseError("line " + std::to_string(lineno) + ": unknown cluster '" + key + "'");
    } else if (record == "order") {
      if (position(key, lineno) != r.order.size() + 1)
        throw ParseError("line " + std::to_string(lineno) + ": order rows out of sequence");
      r.order.push_back(value);
    } else if (record == "zero_contribution") {
      if (position(key, lineno) != r.zero_contribution.size() + 1)
        throw ParseError("line " + std::to_string(lineno) + ": zero_contribution rows out of sequence");
      r.zero_contribution.push_back(value);
    } else if (record == "trace_chosen") {
      auto& rec = trace[position(key, lineno)];
      rec.chosen = value;
    } else if (record == "trace_residual") {
      auto& rec = trace[position(key, lineno)];
      rec.residual = count(value, lineno);
    } else if (record == "trace_new") {
      auto& rec = trace[position(key, lineno)];
      rec.newly_covered = labels(value);
    } else if (record == "trace_tied") {
      auto& rec = trace[position(key, lineno)];
      rec.tied = labels(value);
    } else if (record == "curve") {
      CurvePoint p;
      p.prefix = count(key, lineno);
      auto f = parse_double(value);
      if (!f)
        throw ParseError("line " + std::to_string(lineno) + ": malformed fraction '" + value + "'");
      p.fraction = *f;
      if (p.prefix != r.coverage_curve.size())
        throw ParseError("line " + std::to_string(lineno) + ": curve rows out of sequence");
      r.coverage_curve.push_back(p);
    } else if (record == "uncoverable") {
      if (position(key, lineno) != r.uncoverable.size() + 1)
        throw ParseError("line " + std::to_string(lineno) + ": uncoverable rows out of sequence");
      r.uncoverable.push_back(value);
    } else if (record == "warning") {
      if (position(key, lineno) != r.warnings.size() + 1)
        throw ParseError("line " + std::to_string(lineno) + ": warning rows out of sequence");
      r.warnings.push_back(value);
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown record '" + record + "'");
    }
  }

  if (!saw_schema) throw ParseError("report CSV has no schema record");
  for (auto& [step, rec] : trace) {
    if (step != r.trace.size() + 1) throw ParseError("trace rows out of sequence");
    rec.step = step;
    r.trace.push_back(std::move(rec));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Text
// ---------------------------------------------------------------------------

inline std::string write_report_text(const SuiteReport& r) {
  using report_detail::join_labels;
  std::string out;
  auto line = [&](std::string s) {
    out += s;
    out += '\n';
  };
  auto list = [&](const char* name, const std::vector<std::string>& items) {
    line("  " + std::string(name) + " (" + std::to_string(items.size()) +
         "):" + (items.empty() ? "" : " " + join_labels(items)));
  };

  line("test suite: " + std::to_string(r.original_size) + " test case" +
       (r.original_size == 1 ? "" : "s"));
  if (r.has_selection) {
    line("selection:");
    list("out_dated", r.out_dated);
    list("surplus", r.surplus);
    list("required", r.required);
    line("  size: " + std::to_string(r.original_size) + " -> " + std::to_string(r.required_size));
  }
  if (r.has_prioritization) {
    line("prioritization:");
    list("order", r.order);
    if (!r.zero_contribution.empty()) list("zero_contribution", r.zero_contribution);
    for (const auto& t : r.trace) {
      std::string s = "  step " + std::to_string(t.step) + ": " + t.chosen + " adds " +
                      std::to_string(t.residual) + " statement" + (t.residual == 1 ? "" : "s");
      if (!t.newly_covered.empty()) s += " (" + join_labels(t.newly_covered) + ")";
      if (t.tied.size() > 1) s += " [tie: " + join_labels(t.tied) + "]";
      line(s);
    }
    std::string curve = "  coverage:";
    for (const auto& p : r.coverage_curve)
      curve += " " + std::to_string(p.prefix) + ":" + format_double(p.fraction);
    line(curve);
    if (!r.uncoverable.empty()) list("uncoverable", r.uncoverable);
    line("  size: " + std::to_string(r.required_size) + " -> " + std::to_string(r.prioritized_size));
  }
  for (const auto& w : r.warnings) line("warning: " + w);
  return out;
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

enum class ChartKind { Selection, Prioritization };

/// Two-bar before/after chart. Geometry is all integers, so the byte stream
/// is a pure function of the two sizes.
inline std::string emit_svg_bars(const SuiteReport& r, ChartKind which) {
  std::size_t before, after;
  std::string title, before_label, after_label;
  if (which == ChartKind::Selection) {
    if (!r.has_selection) throw SemanticError("report has no selection data");
    before = r.original_size;
    after = r.required_size;
    title = "Test suite size after selection";
    before_label = "original";
    after_label = "required";
  } else {
    if (!r.has_prioritization) throw SemanticError("report has no prioritization data");
    before = r.required_size;
    after = r.prioritized_size;
    title = "Test suite size after prioritization";
    before_label = "selected";
    after_label = "prioritized";
  }

  const std::size_t width = 320, height = 240;
  const std::size_t plot_top = 40, plot_bottom = 200, plot_height = plot_bottom - plot_top;
  const std::size_t bar_width = 80;
  const std::size_t x1 = 60, x2 = 180;
  const std::size_t scale_max = std::max({before, after, std::size_t{1}});

  auto bar_height = [&](std::size_t v) { return v * plot_height / scale_max; };

  std::string svg;
  auto add = [&](std::string s) {
    svg += s;
    svg += '\n';
  };
  auto bar = [&](std::size_t x, std::size_t value, const std::string& label, const char* fill) {
    std::size_t h = bar_height(value);
    std::size_t y = plot_bottom - h;
    add("  <rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
        std::to_string(bar_width) + "\" height=\"" + std::to_string(h) + "\" fill=\"" + fill + "\"/>");
    add("  <text x=\"" + std::to_string(x + bar_width / 2) + "\" y=\"" +
        std::to_string(y >= 8 ? y - 6 : y) +
        "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
        std::to_string(value) + "</text>");
    add("  <text x=\"" + std::to_string(x + bar_width / 2) + "\" y=\"" +
        std::to_string(plot_bottom + 20) +
        "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + label + "</text>");
  };

  add("<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
  add("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(width) +
      "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " +
      std::to_string(height) + "\">");
  add("  <title>" + title + "</title>");
  add("  <text x=\"" + std::to_string(width / 2) +
      "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" + title +
      "</text>");
  bar(x1, before, before_label, "#4878a8");
  bar(x2, after, after_label, "#58a868");
  add("  <line x1=\"40\" y1=\"" + std::to_string(plot_bottom) + "\" x2=\"" + std::to_string(width - 40) +
      "\" y2=\"" + std::to_string(plot_bottom) + "\" stroke=\"#333333\" stroke-width=\"1\"/>");
  add("</svg>");
  return svg;
}

// ---------------------------------------------------------------------------
// Pretty printers for the demo tables
// ---------------------------------------------------------------------------

inline std::string format_matrix(const CoverageMatrix& m) {
  std::size_t label_width = 0;
  for (const auto& t : m.tests()) label_width = std::max(label_width, t.label.size());

  std::vector<std::size_t> col_width(m.statement_count());
  for (std::size_t j = 0; j < m.statement_count(); ++j)
    col_width[j] = std::max<std::size_t>(m.statements()[j].label.size(), 1);

  std::string out(label_width, ' ');
  for (std::size_t j = 0; j < m.statement_count(); ++j) {
    out += "  ";
    const auto& label = m.statements()[j].label;
    out.append(col_width[j] - label.size(), ' ');
    out += label;
  }
  out += '\n';
  for (std::size_t i = 0; i < m.test_count(); ++i) {
    const auto& label = m.tests()[i].label;
    out += label;
    out.append(label_width - label.size(), ' ');
    for (std::size_t j = 0; j < m.statement_count(); ++j) {
      out += "  ";
      out.append(col_width[j] - 1, ' ');
      out += m.cell(i, j) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

inline std::string format_counts(const std::vector<std::pair<std::string, std::size_t>>& counts) {
  std::size_t label_width = 0;
  for (const auto& [label, _] : counts) label_width = std::max(label_width, label.size());
  std::string out;
  for (const auto& [label, value] : counts) {
    out += label;
    out.append(label_width - label.size(), ' ');
    out += "  ";
    out += std::to_string(value);
    out += '\n';
  }
  return out;
}

}  // namespace covsel
