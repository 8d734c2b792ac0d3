#include "fockforge/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fockforge {

CheckLine assert_line(std::string label, double value, double tolerance, double budget) {
  return {std::move(label), CheckKind::Assert, value, tolerance, budget, value <= tolerance + budget};
}

CheckLine control_line(std::string label, double value, double threshold) {
  return {std::move(label), CheckKind::NegativeControl, value, threshold, 0.0, value >= threshold};
}

CheckLine probe_line(std::string label, double value) {
  return {std::move(label), CheckKind::Probe, value, 0.0, 0.0, true};
}

std::string to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::Assert: return "assert";
    case CheckKind::NegativeControl: return "negative-control";
    case CheckKind::Probe: return "probe";
  }
  return "?";
}

bool VerificationReport::passed() const {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass; });
}

bool SuiteBlock::passed() const {
  return std::all_of(reports.begin(), reports.end(), [](const VerificationReport& r) { return r.passed(); });
}

namespace {

nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

}  // namespace

nlohmann::json to_json(const CheckLine& line) {
  nlohmann::json j{{"label", line.label}, {"kind", to_string(line.kind)}, {"value", number(line.value)}};
  if (line.kind != CheckKind::Probe) {
    j["tolerance"] = number(line.tolerance);
    j["budget"] = number(line.budget);
  }
  j["pass"] = line.pass;
  return j;
}

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& l : report.lines) lines.push_back(to_json(l));
  nlohmann::json j{{"check", report.check}, {"parameters", report.parameters}, {"lines", lines},
                   {"pass", report.passed()}};
  if (!report.data.empty()) j["data"] = report.data;
  return j;
}

nlohmann::json to_json(const ResolutionReport& r) {
  return {{"family", r.family},
          {"measure", r.measure},
          {"expected", r.expected},
          {"probe", r.probe},
          {"gram_deviation", number(r.gram_deviation)},
          {"worst_entry", {r.worst_row, r.worst_col}},
          {"min_eigenvalue", number(r.min_eigenvalue)},
          {"hermiticity", number(r.hermiticity)},
          {"radial_nodes", r.radial_nodes},
          {"angular_nodes", r.angular_nodes}};
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string render_csv(const CsvTable& table) {
  std::ostringstream out;
  auto row = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) out << (c ? "," : "") << cells[c];
    out << '\n';
  };
  row(table.header);
  for (const auto& r : table.rows) row(r);
  return out.str();
}

CsvTable gram_csv(const std::string& name, const ResolutionReport& report) {
  CsvTable t;
  t.name = name;
  t.header.push_back("row");
  for (auto p : report.probe) t.header.push_back("re_" + std::to_string(p));
  for (auto p : report.probe) t.header.push_back("im_" + std::to_string(p));
  for (Eigen::Index i = 0; i < report.gram.rows(); ++i) {
    std::vector<std::string> cells{std::to_string(report.probe[static_cast<std::size_t>(i)])};
    for (Eigen::Index j = 0; j < report.gram.cols(); ++j) cells.push_back(format_double(report.gram(i, j).real()));
    for (Eigen::Index j = 0; j < report.gram.cols(); ++j) cells.push_back(format_double(report.gram(i, j).imag()));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

nlohmann::json to_json(const SuiteBlock& block) {
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& r : block.reports) reports.push_back(to_json(r));
  nlohmann::json tables = nlohmann::json::array();
  for (const auto& t : block.tables) tables.push_back(t.name);
  return {{"suite", block.suite}, {"params", block.params}, {"reports", reports}, {"tables", tables},
          {"pass", block.passed()}};
}

std::string render_text(const std::vector<SuiteBlock>& blocks) {
  std::ostringstream out;
  char buf[256];
  for (const auto& b : blocks) {
    out << "== " << b.suite << "  " << b.params.dump() << "  [" << (b.passed() ? "PASS" : "FAIL") << "]\n";
    for (const auto& r : b.reports) {
      out << "  -- " << r.check << "\n";
      for (const auto& l : r.lines) {
        const char* verdict = l.kind == CheckKind::Probe ? "info" : (l.pass ? "pass" : "FAIL");
        if (l.kind == CheckKind::Probe) {
          std::snprintf(buf, sizeof buf, "    %-16s %-4s %12.4e %12s %12s  ", to_string(l.kind).c_str(), verdict,
                        l.value, "", "");
        } else {
          std::snprintf(buf, sizeof buf, "    %-16s %-4s %12.4e %12.4e %12.4e  ", to_string(l.kind).c_str(), verdict,
                        l.value, l.tolerance, l.budget);
        }
        out << buf << l.label << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace fockforge
