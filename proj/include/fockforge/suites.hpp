#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fockforge/report.hpp"

namespace fockforge {

struct SuiteRequest {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
};

struct RunConfig {
  int modes = 1;
  int cutoff = 20;
  int radial_order = 64;
  int angular_order = 64;
  double tolerance = 1e-12;
  std::vector<SuiteRequest> suites;
  std::string output_directory = "fockforge-out";
  std::vector<std::string> formats{"json", "txt", "csv"};
  bool override_memory_guard = false;

  /// Fully defaulted form, echoed into report.json.
  nlohmann::json echo() const;
};

struct SuiteInfo {
  std::string name;
  std::string summary;
  nlohmann::json params;  // parameter name -> description
};

const std::vector<SuiteInfo>& suite_catalog();

/// Throws Config errors naming the offending field.
RunConfig parse_config(const nlohmann::json& j, bool override_memory_guard = false);
RunConfig parse_config_text(const std::string& text, bool override_memory_guard = false);
RunConfig parse_config_file(const std::string& path, bool override_memory_guard = false);

SuiteBlock run_suite(const RunConfig& config, const SuiteRequest& request);

struct RunResult {
  std::vector<SuiteBlock> blocks;
  bool passed() const;
};

RunResult run_config(const RunConfig& config);

/// Writes report.json / report.txt / CSV tables per `formats`, plus
/// metadata.json (timestamps, runtimes, threads). Throws Io errors.
void emit_report(const RunConfig& config, const RunResult& result, const std::string& directory,
                 const std::vector<std::string>& formats);

/// Canonical report.json content.
std::string report_json(const RunConfig& config, const RunResult& result);

CsvTable bessel_check_table(const std::vector<int>& nus, const std::vector<double>& zs);

}  // namespace fockforge
