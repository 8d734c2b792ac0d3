// Acceptance gate: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fockforge/fockforge.h"
#include "fockforge/specfun.hpp"
#include "fockforge/states.hpp"
#include "fockforge/suites.hpp"
#include "fockforge/verify.hpp"

using namespace fockforge;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Tally {
  int asserts = 0;
  int failed = 0;
  double worst_ratio = 0.0;  // value / (tolerance + budget) over asserts
  std::string first_failure;
};

void tally_block(const SuiteBlock& block, Tally& t) {
  for (const auto& r : block.reports) {
    for (const auto& l : r.lines) {
      if (l.kind == CheckKind::Probe) continue;
      ++t.asserts;
      if (l.kind == CheckKind::Assert) {
        const double allowed = l.tolerance + l.budget;
        if (allowed > 0.0) t.worst_ratio = std::max(t.worst_ratio, l.value / allowed);
      }
      if (!l.pass) {
        ++t.failed;
        if (t.first_failure.empty()) {
          std::ostringstream os;
          os << r.check << ": " << l.label << " = " << l.value;
          t.first_failure = os.str();
        }
      }
    }
  }
}

Tally run_suites(const json& config) {
  const auto c = parse_config(config);
  const auto result = run_config(c);
  Tally t;
  for (const auto& b : result.blocks) tally_block(b, t);
  return t;
}

Outcome from_tally(const Tally& t, const std::string& extra = {}) {
  std::ostringstream os;
  os << t.asserts << " checks, " << t.failed << " failed, worst value/allowed " << t.worst_ratio;
  if (!t.first_failure.empty()) os << "; first failure: " << t.first_failure;
  if (!extra.empty()) os << "; " << extra;
  return {t.failed == 0 && t.asserts > 0, os.str()};
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json alpha_json(const std::vector<cplx>& a) {
  json j = json::array();
  for (auto z : a) j.push_back(cplx_json(z));
  return j;
}

std::vector<cplx> random_alpha(std::mt19937& rng, int modes, double radius) {
  std::normal_distribution<double> g;
  std::vector<cplx> a(modes);
  for (auto& z : a) z = {g(rng), g(rng)};
  const double s = radius / std::sqrt(squared_norm(a));
  for (auto& z : a) z *= s;
  return a;
}

// C+ for C+ |a> + C- |-a> with C-/C+ = ratio, normalized.
double cat_c_plus(const std::vector<cplx>& alpha, cplx ratio) {
  const double overlap = std::exp(-2.0 * squared_norm(alpha));
  return 1.0 / std::sqrt(1.0 + std::norm(ratio) + 2.0 * ratio.real() * overlap);
}

json generic_cat(const std::vector<cplx>& alpha, cplx ratio) {
  const double cp = cat_c_plus(alpha, ratio);
  return {{"family", "cat"}, {"alpha", alpha_json(alpha)}, {"c_plus", cp}, {"c_minus", cplx_json(cp * ratio)}};
}

json squared_cat(const std::vector<cplx>& alpha, cplx ratio, cplx d_ratio) {
  const double cp = cat_c_plus(alpha, ratio);
  return {{"family", "squared_cat"}, {"alpha", alpha_json(alpha)}, {"c_plus", cp}, {"c_minus", cplx_json(cp * ratio)},
          {"d_plus", 1.0}, {"d_minus", cplx_json(d_ratio)}, {"normalize", true}};
}

Outcome criterion_1() {
  json suites = json::array();
  for (int n : {2, 3}) suites.push_back({{"name", "relations"}, {"params", {{"algebra", "sp"}, {"modes", n}, {"cutoff", 12}, {"tolerance", 1e-12}}}});
  return from_tally(run_suites({{"suites", suites}}));
}

Outcome criterion_2() {
  return from_tally(run_suites(
      {{"suites", json::array({{{"name", "casimir"}, {"params", {{"cutoff", 20}, {"tolerance", 1e-12}}}}})}}));
}

Outcome criterion_3() {
  std::mt19937 rng(20240611);
  json cases = json::array();
  const double phis[] = {0.0, 0.3, std::numbers::pi / 4, 1.2};
  for (int modes = 1; modes <= 3; ++modes) {
    for (double radius : {0.5, 1.0, 1.5}) {
      const auto a = random_alpha(rng, modes, radius);
      cases.push_back({{"family", "even"}, {"alpha", alpha_json(a)}});
      cases.push_back({{"family", "odd"}, {"alpha", alpha_json(a)}});
      cases.push_back(generic_cat(a, {0.4, -0.7}));
      for (double phi : phis) {
        for (const char* sign : {"+", "-"}) {
          cases.push_back({{"family", "phi_cat"}, {"alpha", alpha_json(a)}, {"phi", phi}, {"sign", sign}});
        }
      }
      cases.push_back(squared_cat(a, {0.0, 0.5}, -0.3));
    }
  }
  // the 1e-14 floor absorbs rounding where the tail bound itself underflows
  json params = {{"cases", cases}, {"budget_factor", 10.0}, {"tolerance", 1e-14}};
  return from_tally(run_suites({{"basis", {{"cutoff", 24}}}, {"suites", json::array({{{"name", "eigenstates"}, {"params", params}}})}}),
                    std::to_string(cases.size()) + " states");
}

Outcome criterion_4() {
  json cases = json::array();
  for (double phi : {0.0, 0.3, std::numbers::pi / 4, 1.2}) {
    for (const char* sign : {"+", "-"}) {
      cases.push_back({{"family", "phi_cat"}, {"phi", phi}, {"sign", sign}, {"modes", 1}, {"cutoff", 14}, {"probe_max_total", 14}});
      cases.push_back({{"family", "phi_cat"}, {"phi", phi}, {"sign", sign}, {"modes", 2}, {"cutoff", 5}, {"probe_max_total", 5}});
    }
  }
  json params = {{"cases", cases}};
  for (auto& c : params["cases"]) c["tolerance"] = 1e-10;
  return from_tally(run_suites({{"suites", json::array({{{"name", "resolve-identity"}, {"params", params}}})}}),
                    "probe sizes 15 / 21");
}

Outcome criterion_5() {
  json cases = json::array();
  for (const char* f : {"even", "odd"}) {
    cases.push_back({{"family", f}, {"modes", 1}, {"cutoff", 14}, {"probe_max_total", 14}, {"tolerance", 1e-10}});
    cases.push_back({{"family", f}, {"modes", 2}, {"cutoff", 5}, {"probe_max_total", 5}, {"tolerance", 1e-10}});
    cases.push_back({{"family", f}, {"modes", 1}, {"cutoff", 14}, {"probe_max_total", 14}, {"full_identity", true},
                     {"control_threshold", 0.5}});
  }
  return from_tally(run_suites({{"suites", json::array({{{"name", "resolve-identity"}, {"params", {{"cases", cases}}}}})}}));
}

Outcome criterion_6() {
  json cases = json::array();
  for (double k : {0.5, 1.0}) {
    cases.push_back({{"family", "bg_su11"}, {"k", k}, {"cutoff", 8}, {"probe_max_total", 8}, {"tolerance", 1e-8}});
  }
  auto t = run_suites({{"suites", json::array({{{"name", "resolve-identity"}, {"params", {{"cases", cases}}}}})}});
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const auto basis = build_basis(1, 120);
  double worst = 0.0;
  for (double k : {0.5, 1.0}) {
    for (int n = 0; n < 20; ++n) {
      const cplx z1{u(rng), u(rng)}, z2{u(rng), u(rng)};
      const auto s1 = bg_su11_cs({z1, k}, basis);
      const auto s2 = bg_su11_cs({z2, k}, basis);
      worst = std::max(worst, std::abs(inner_product(s1, s2) - bg_overlap_closed_form(z1, z2, k)));
    }
  }
  ++t.asserts;
  if (!(worst <= 1e-10)) {
    ++t.failed;
    if (t.first_failure.empty()) t.first_failure = "overlap closed form";
  }
  std::ostringstream os;
  os << "worst overlap mismatch " << worst << " on 20 pairs per k";
  return from_tally(t, os.str());
}

Outcome criterion_7() {
  json suites = json::array();
  const json a11 = alpha_json({{0.8, 0.2}, {0.5, -0.4}});
  const json a21 = alpha_json({{0.6, 0.2}, {0.5, -0.4}, {0.3, 0.7}});
  for (const auto& [p, a] : {std::pair{1, a11}, std::pair{2, a21}}) {
    suites.push_back({{"name", "sectors"},
                      {"params", {{"alpha", a}, {"p", p}, {"q", 1}, {"cutoff", 24}, {"ls", {-2, -1, 0, 1, 2}},
                                  {"resolution", true}, {"resolution_tolerance", 1e-8}}}});
    suites.push_back({{"name", "reconstruction"}, {"params", {{"alpha", a}, {"p", p}, {"q", 1}, {"cutoff", 24}}}});
  }
  return from_tally(run_suites({{"suites", suites}}));
}

Outcome criterion_8() {
  return from_tally(run_suites(
      {{"suites", json::array({{{"name", "bessel-check"}, {"params", {{"identities", true}}}}})}}));
}

Outcome criterion_9() {
  const MeasureSpec b{MeasureKind::FujiiK, 2, 0.5, -2, 1, 1};
  std::ostringstream os;
  double spread = 0.0;
  for (bool corrected : {false, true}) {
    const MeasureSpec a{MeasureKind::UpqZ, 2, 0.5, -2, 1, 1, corrected};
    const auto probe = measure_uniqueness_probe(a, b, {{0}, {1}, {2}, {3}, {4}});
    if (!corrected) spread = probe.ratio_spread;
    os << (corrected ? "; corrected exponent: spread " : "moment ratio spread ") << probe.ratio_spread
       << (corrected ? "" : " (limit 1e-6)") << ", ratios/pi";
    for (double r : probe.ratios) os << ' ' << r / std::numbers::pi;
  }
  double mellin = 0.0;
  for (int nu = 0; nu <= 3; ++nu) {
    for (double z : {0.5, 1.0, 2.0}) mellin = std::max(mellin, knu_integral_probe(nu, z).classical_rel_error);
  }
  os << "; Mellin-form rel. error " << mellin << " (limit 1e-9)";
  return {spread <= 1e-6 && mellin <= 1e-9, os.str()};
}

Outcome criterion_10() {
  std::mt19937 rng(5);
  json cases = json::array();
  const auto pairs = [](int modes) {
    std::vector<std::pair<int, int>> out;
    for (int i = 1; i <= modes; ++i)
      for (int j = i; j <= modes; ++j) out.emplace_back(i, j);
    return out;
  };
  for (int modes = 1; modes <= 2; ++modes) {
    for (double radius : {0.6, 1.4}) {
      const auto a = random_alpha(rng, modes, radius);
      std::vector<json> states{
          {{"family", "glauber"}, {"alpha", alpha_json(a)}},
          {{"family", "even"}, {"alpha", alpha_json(a)}},
          {{"family", "odd"}, {"alpha", alpha_json(a)}},
          generic_cat(a, {-0.2, 0.9}),
          {{"family", "phi_cat"}, {"alpha", alpha_json(a)}, {"phi", 0.3}, {"sign", "-"}},
          squared_cat(a, 0.4, {0.0, 0.6}),
      };
      for (auto s : states) {
        for (auto [i, j] : pairs(modes)) {
          s["i"] = i;
          s["j"] = j;
          cases.push_back(s);
        }
      }
    }
  }
  for (double k : {0.5, 1.0, 1.5}) cases.push_back({{"family", "bg_su11"}, {"z", cplx_json({0.9, -0.4})}, {"k", k}, {"i", 1}, {"j", 1}});
  return from_tally(run_suites({{"basis", {{"cutoff", 30}}},
                                {"suites", json::array({{{"name", "variance"}, {"params", {{"cases", cases}, {"tolerance", 1e-12}}}}})}}),
                    std::to_string(cases.size()) + " cases");
}

std::string run_report(const std::string& config, const std::string& dir, int& exit_code) {
  char* text = nullptr;
  if (ff_run_text(config.c_str(), dir.c_str(), "json", 0, &exit_code, &text) != FF_OK) {
    exit_code = 2;
    return {};
  }
  ff_string_free(text);
  FILE* f = std::fopen((dir + "/report.json").c_str(), "rb");
  if (!f) return {};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  std::fclose(f);
  return out;
}

Outcome criterion_11() {
  const std::string config = R"({"basis":{"cutoff":10},"output":{"directory":"acceptance-out"},"suites":[
    {"name":"relations","params":{"algebra":"sp","modes":2,"cutoff":8}},
    {"name":"eigenstates","params":{"cases":[{"family":"phi_cat","alpha":[[0.7,0],[0.6,0.2]],"phi":0.4,"cutoff":20}]}},
    {"name":"resolve-identity","params":{"cases":[{"family":"phi_cat","phi":0.3,"modes":2,"cutoff":5}]}},
    {"name":"bessel-check"}]})";
  const std::string dir = "acceptance-out";
  int e1 = 0, e2 = 0, e3 = 0;
  unsetenv("FOCKFORGE_THREADS");
  const auto r1 = run_report(config, dir, e1);
  const auto r2 = run_report(config, dir, e2);
  setenv("FOCKFORGE_THREADS", "1", 1);
  const auto r3 = run_report(config, dir, e3);
  unsetenv("FOCKFORGE_THREADS");
  const bool same = !r1.empty() && r1 == r2 && r1 == r3;
  std::ostringstream os;
  os << "report.json " << r1.size() << " bytes, exit codes " << e1 << "/" << e2 << "/" << e3
     << (same ? ", identical across runs and thread counts" : ", reports differ");
  return {same && e1 == 0 && e2 == 0 && e3 == 0, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double time_limit;  // seconds, 0 for none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, 30.0, criterion_1},  {2, 1.0, criterion_2},   {3, 60.0, criterion_3}, {4, 120.0, criterion_4},
      {5, 0.0, criterion_5},   {6, 0.0, criterion_6},   {7, 0.0, criterion_7},  {8, 0.0, criterion_8},
      {9, 10.0, criterion_9},  {10, 0.0, criterion_10}, {11, 0.0, criterion_11},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      o.pass = false;
      o.detail += "; over the time limit";
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d: %s  (%.2f s%s) %s\n", c.id, o.pass ? "PASS" : "FAIL", secs,
                c.time_limit > 0.0 ? (", limit " + std::to_string(static_cast<int>(c.time_limit)) + " s").c_str() : "",
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
