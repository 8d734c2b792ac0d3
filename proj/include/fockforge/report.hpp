#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace fockforge {

enum class CheckKind { Assert, NegativeControl, Probe };

/// One verdict. Assert lines pass when value <= tolerance + budget,
/// negative controls when value >= tolerance, probes always.
struct CheckLine {
  std::string label;
  CheckKind kind = CheckKind::Assert;
  double value = 0.0;
  double tolerance = 0.0;
  double budget = 0.0;
  bool pass = true;
};

CheckLine assert_line(std::string label, double value, double tolerance, double budget = 0.0);
CheckLine control_line(std::string label, double value, double threshold);
CheckLine probe_line(std::string label, double value);

std::string to_string(CheckKind kind);

struct VerificationReport {
  std::string check;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<CheckLine> lines;
  nlohmann::json data = nlohmann::json::object();

  bool passed() const;
};

struct ResolutionReport {
  std::string family;
  nlohmann::json measure;
  std::string expected;  // "identity", "parity_even", "sector l=2", ...
  std::vector<std::size_t> probe;
  double gram_deviation = 0.0;
  std::size_t worst_row = 0;
  std::size_t worst_col = 0;
  double min_eigenvalue = 0.0;
  double hermiticity = 0.0;
  std::size_t radial_nodes = 0;
  std::size_t angular_nodes = 0;
  double runtime_seconds = 0.0;  // metadata only, never in report.json
  Eigen::MatrixXcd gram;
  Eigen::MatrixXcd target;
};

nlohmann::json to_json(const CheckLine& line);
nlohmann::json to_json(const VerificationReport& report);
/// Without runtime; the Gram matrix itself goes to CSV.
nlohmann::json to_json(const ResolutionReport& report);

struct CsvTable {
  std::string name;  // file name, e.g. "gram_phi_cat.csv"
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string render_csv(const CsvTable& table);
/// Real and imaginary parts side by side, header naming probe ordinals.
CsvTable gram_csv(const std::string& name, const ResolutionReport& report);
std::string format_double(double x);

struct SuiteBlock {
  std::string suite;
  nlohmann::json params = nlohmann::json::object();
  std::vector<VerificationReport> reports;
  std::vector<CsvTable> tables;
  double runtime_seconds = 0.0;

  bool passed() const;
};

nlohmann::json to_json(const SuiteBlock& block);
/// Aligned columns: kind, verdict, value, tolerance, budget, label.
std::string render_text(const std::vector<SuiteBlock>& blocks);

}  // namespace fockforge
