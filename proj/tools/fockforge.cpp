#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fockforge/fockforge.h"

namespace {

// "0..3" or "0,1,2,3"
std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) out.push_back(std::stoi(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) out.push_back(std::stod(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int report_failure(ff_status status) {
  std::cerr << "fockforge: " << ff_status_name(status) << ": " << ff_last_error() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent-state construction and verification on truncated Fock spaces"};
  app.set_version_flag("--version", std::string(ff_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string formats;
  bool override_guard = false;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "run the suites listed in a JSON config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory (default from config)");
  run->add_option("--format", formats, "comma-separated subset of json,txt,csv");
  run->add_flag("--override-memory-guard", override_guard, "allow bases above 10^6 states");
  run->add_flag("-q,--quiet", quiet, "do not print the text report");

  auto* suites = app.add_subcommand("suites", "list suites and their parameters");

  std::string nu_text = "0..3";
  std::string z_text = "0.5,1,2";
  std::string bessel_out;
  auto* bessel = app.add_subcommand("bessel-check", "tabulate the K_nu integral representation");
  bessel->add_option("--nu", nu_text, "orders, e.g. 0..3 or 0,2")->capture_default_str();
  bessel->add_option("--z", z_text, "arguments, e.g. 0.5,1,2")->capture_default_str();
  bessel->add_option("--out", bessel_out, "also write bessel_check.csv into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run) {
    int exit_code = 2;
    char* text = nullptr;
    const ff_status s = ff_run_file(config_path.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
                                    formats.empty() ? nullptr : formats.c_str(), override_guard ? 1 : 0, &exit_code,
                                    quiet ? nullptr : &text);
    if (s != FF_OK) return report_failure(s);
    if (text) std::cout << text;
    ff_string_free(text);
    std::cout << (exit_code == 0 ? "PASS" : "FAIL") << "\n";
    return exit_code;
  }

  if (*suites) {
    char* text = nullptr;
    const ff_status s = ff_suite_catalog(&text);
    if (s != FF_OK) return report_failure(s);
    std::cout << text << "\n";
    ff_string_free(text);
    return 0;
  }

  if (*bessel) {
    std::vector<int> nus;
    std::vector<double> zs;
    try {
      nus = parse_orders(nu_text);
      zs = parse_reals(z_text);
    } catch (const std::exception&) {
      std::cerr << "fockforge: cannot parse --nu '" << nu_text << "' or --z '" << z_text << "'\n";
      return 2;
    }
    char* csv = nullptr;
    const ff_status s = ff_bessel_check_csv(nus.data(), nus.size(), zs.data(), zs.size(), &csv);
    if (s != FF_OK) return report_failure(s);
    std::cout << csv;
    if (!bessel_out.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(bessel_out, ec);
      std::ofstream out(std::filesystem::path(bessel_out) / "bessel_check.csv", std::ios::binary);
      out << csv;
      if (!out) {
        ff_string_free(csv);
        std::cerr << "fockforge: cannot write " << bessel_out << "/bessel_check.csv\n";
        return 2;
      }
    }
    ff_string_free(csv);
    return 0;
  }
  return 2;
}
