#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fockforge/error.hpp"
#include "fockforge/suites.hpp"

using namespace fockforge;
using nlohmann::json;

namespace {

std::string config_message(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
    return e.what();
  }
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("defaults") {
  const auto c = parse_config_text(R"({"suites":["casimir"]})");
  CHECK(c.modes == 1);
  CHECK(c.cutoff == 20);
  CHECK(c.tolerance == 1e-12);
  CHECK(c.radial_order == 64);
  CHECK(c.angular_order == 64);
  CHECK(c.formats == std::vector<std::string>{"json", "txt", "csv"});
  REQUIRE(c.suites.size() == 1);
  CHECK(c.suites[0].name == "casimir");
  const auto echo = c.echo();
  CHECK(echo.at("basis").at("cutoff") == 20);
  CHECK(echo.at("tolerance") == 1e-12);
}

TEST_CASE("config errors name the field") {
  CHECK(contains(config_message(R"({"suites":["nope"]})"), "unknown suite 'nope'"));
  CHECK(contains(config_message(R"({"suites":["nope"]})"), "relations"));
  CHECK(contains(config_message(R"({"suites":[{"name":"casimir","params":{"cutof":3}}]})"),
                 "suites[0].params.cutof: unknown field"));
  CHECK(contains(config_message(R"({"suites":[{"name":"casimir","params":{"cutoff":"3"}}]})"),
                 "suites[0].params.cutoff: expected integer"));
  CHECK(contains(config_message(R"({"suites":[]})"), "suites"));
  CHECK(contains(config_message(R"({"basis":{"modes":0},"suites":["casimir"]})"), "basis.modes"));
  CHECK(contains(config_message(R"({"suites":["casimir"],"output":{"formats":["xml"]}})"), "xml"));
  CHECK(contains(config_message("{not json"), "valid JSON"));
  CHECK(contains(config_message(R"({"suites":["casimir"],"extra":1})"), "config.extra"));
}

TEST_CASE("memory guard") {
  const std::string big = R"({"suites":[{"name":"relations","params":{"algebra":"sp","modes":6,"cutoff":30}}]})";
  const auto msg = config_message(big);
  CHECK(contains(msg, "memory guard"));
  CHECK(contains(msg, "--override-memory-guard"));
  CHECK_NOTHROW(parse_config_text(big, true));
}

TEST_CASE("catalog") {
  const auto& cat = suite_catalog();
  std::vector<std::string> names;
  for (const auto& s : cat) names.push_back(s.name);
  for (const char* n : {"relations", "casimir", "eigenstates", "resolve-identity", "sectors", "reconstruction",
                        "measure-uniqueness", "bessel-check", "variance"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
  for (const auto& s : cat) CHECK_FALSE(s.summary.empty());
}

TEST_CASE("runs are deterministic") {
  const auto c = parse_config_text(R"({"basis":{"cutoff":10},"suites":[
    {"name":"relations","params":{"algebra":"su11"}},
    "casimir",
    {"name":"bessel-check","params":{"nu":[0,1],"z":[1.0]}},
    {"name":"sectors","params":{"alpha":[[0.5,0.1],[0.3,-0.2]],"cutoff":12,"probe_max_total":3}}]})");
  const auto a = run_config(c);
  const auto b = run_config(c);
  CHECK(a.passed());
  CHECK(report_json(c, a) == report_json(c, b));
  const auto j = json::parse(report_json(c, a));
  CHECK(j.at("pass") == true);
  CHECK(j.at("suites").size() == 4);
  CHECK_FALSE(contains(report_json(c, a), "runtime"));
}

TEST_CASE("emit writes the requested formats") {
  const auto dir = std::filesystem::temp_directory_path() / "fockforge_test_suites";
  std::filesystem::remove_all(dir);
  const auto c = parse_config_text(R"({"suites":[{"name":"bessel-check","params":{"nu":[0],"z":[0.5,1]}}]})");
  const auto r = run_config(c);
  emit_report(c, r, dir.string(), {"json", "csv"});
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "metadata.json"));
  CHECK(std::filesystem::exists(dir / "bessel_check.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "report.txt"));
  CHECK(json::parse(slurp(dir / "report.json")) == json::parse(report_json(c, r)));
  const auto meta = json::parse(slurp(dir / "metadata.json"));
  CHECK(meta.contains("threads"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("failing asserts fail the run") {
  const auto c = parse_config_text(R"({"suites":[{"name":"measure-uniqueness","params":{"spread_tolerance":1e-6}}]})");
  CHECK_FALSE(run_config(c).passed());
  const auto control = parse_config_text(R"({"suites":[
    {"name":"variance","params":{"cases":[{"family":"fock","occupations":[1],"i":1,"j":1,"control":true}]}}]})");
  CHECK(run_config(control).passed());
}

TEST_CASE("bessel table") {
  const auto t = bessel_check_table({0, 1}, {0.5, 1.0, 2.0});
  CHECK(t.name == "bessel_check.csv");
  CHECK(t.rows.size() == 6);
}
