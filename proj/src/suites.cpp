#include "fockforge/suites.hpp"

#include <chrono>
#include <climits>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "fockforge/error.hpp"
#include "fockforge/parallel.hpp"
#include "fockforge/verify.hpp"

namespace fockforge {

namespace {

using json = nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct Field {
  const char* key;
  const char* type;  // integer, number, boolean, string, array, object
  const char* about;
};

struct Schema {
  const char* name;
  const char* summary;
  std::vector<Field> fields;
};

const std::vector<Field> kBasisFields{
    {"modes", "integer", "mode count (default from config basis)"},
    {"cutoff", "integer", "total-quanta cutoff (default from config basis)"},
};

std::vector<Field> with_basis(std::vector<Field> f) {
  f.insert(f.begin(), kBasisFields.begin(), kBasisFields.end());
  return f;
}

const std::vector<Schema>& schemas() {
  static const std::vector<Schema> s{
      {"relations", "commutation tables on interior Fock states",
       with_basis({{"algebra", "string", "sp | u_pq | su11 (default sp)"},
                   {"p", "integer", "u_pq: modes in the first block (default 1)"},
                   {"q", "integer", "u_pq: modes in the second block (default modes - p)"},
                   {"margin", "integer", "interior margin below the cutoff (default 4)"},
                   {"tolerance", "number", "residual tolerance (default config tolerance)"}})},
      {"casimir", "one-mode su(1,1) Casimir on interior states",
       {{"cutoff", "integer", "cutoff (default from config basis)"},
        {"margin", "integer", "interior margin (default 4)"},
        {"tolerance", "number", "residual tolerance (default config tolerance)"}}},
      {"eigenstates", "eigenvalue equations of constructed states",
       with_basis({{"cases", "array", "state records (glauber, cat, even, odd, phi_cat, squared_cat, bg_su11)"},
                   {"budget_factor", "number", "multiplier on the Poisson tail bound (default 10)"},
                   {"tolerance", "number", "round-off allowance added to every line (default 1e-13)"},
                   {"analytic_rep", "array", "[{k, max_degree}] differential realization checks"},
                   {"phi_rep", "array", "[{phi, sign, max_degree}] phi-representation checks"},
                   {"factorization", "array", "[{z: complex matrix, expect_factorizable}]"}})},
      {"resolve-identity", "Gram matrix of a family under its measure",
       with_basis({{"cases", "array",
                    "[{family, phi, sign, k, p, q, l, modes, cutoff, measure, probe_max_total, full_identity, "
                    "tolerance, control_threshold, report_only, radial_order, angular_order}]"}})},
      {"sectors", "u(p,q) sector support, L eigenvalues, overlaps and 1_l resolution",
       with_basis({{"alpha", "array", "complex amplitudes, length p + q"},
                   {"p", "integer", "first block size (default 1)"},
                   {"q", "integer", "second block size (default len(alpha) - p)"},
                   {"ls", "array", "sector labels (default -2..2)"},
                   {"resolution", "boolean", "also resolve 1_l under the Gaussian measure (default true)"},
                   {"resolution_tolerance", "number", "Gram tolerance (default 1e-8)"},
                   {"probe_max_total", "integer", "probe states with n_tot <= this (default 6)"}})},
      {"reconstruction", "Glauber state rebuilt from its sector components",
       with_basis({{"alpha", "array", "complex amplitudes, length p + q"},
                   {"p", "integer", "first block size (default 1)"},
                   {"q", "integer", "second block size (default len(alpha) - p)"},
                   {"l_min", "integer", "lowest sector (default -cutoff)"},
                   {"l_max", "integer", "highest sector (default cutoff)"},
                   {"drop", "integer", "sector left out of the sum (control)"}})},
      {"measure-uniqueness", "moments of two radial densities",
       {{"a", "object", "measure {kind, l, p, q, k, modes, corrected_exponent, scale} (default upq_z l=-2 p=1 q=1)"},
        {"b", "object", "measure (default fujii_k l=-2 p=1)"},
        {"degrees", "array", "monomial degree tuples (default [[0],[1],[2],[3],[4]])"},
        {"spread_tolerance", "number", "assert ratio spread below this (default: report only)"}}},
      {"bessel-check", "K_nu integral representation table",
       {{"nu", "array", "orders (default [0,1,2,3])"},
        {"z", "array", "arguments (default [0.5,1,2])"},
        {"identities", "boolean", "add Wronskian, K_1/2 and BG moment identities (default false)"}}},
      {"variance", "quadrature variances of E(i,j) on constructed states",
       with_basis({{"cases", "array", "state records with i, j and optional control flag"},
                   {"tolerance", "number", "round-off allowance (default config tolerance)"}})},
  };
  return s;
}

const Schema* find_schema(const std::string& name) {
  for (const auto& s : schemas()) {
    if (name == s.name) return &s;
  }
  return nullptr;
}

std::string catalog_names() {
  std::string out;
  for (const auto& s : schemas()) out += (out.empty() ? "" : ", ") + std::string(s.name);
  return out;
}

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  fail(ErrorCode::Config, field + ": " + what);
}

bool type_matches(const json& v, const std::string& type) {
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "boolean") return v.is_boolean();
  if (type == "string") return v.is_string();
  if (type == "array") return v.is_array();
  if (type == "object") return v.is_object();
  return true;
}

void check_fields(const json& obj, const std::vector<Field>& fields, const std::string& path) {
  if (!obj.is_object()) config_error(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    const Field* match = nullptr;
    for (const auto& f : fields) {
      if (key == f.key) match = &f;
    }
    if (!match) {
      std::string allowed;
      for (const auto& f : fields) allowed += (allowed.empty() ? "" : ", ") + std::string(f.key);
      config_error(path + "." + key, "unknown field (allowed: " + allowed + ")");
    }
    if (!type_matches(value, match->type)) config_error(path + "." + key, std::string("expected ") + match->type);
  }
}

/// Typed access to suite parameters; values read are echoed into `used`.
class Params {
 public:
  Params(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  bool has(const char* key) const { return j_.contains(key); }

  int integer(const char* key, int fallback, int lo = INT_MIN, int hi = INT_MAX) {
    int v = fallback;
    if (has(key)) {
      if (!j_.at(key).is_number_integer()) bad(key, "expected integer");
      v = j_.at(key).get<int>();
    }
    if (v < lo || v > hi) bad(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    used[key] = v;
    return v;
  }

  std::optional<int> maybe_integer(const char* key) {
    if (!has(key)) return std::nullopt;
    return integer(key, 0);
  }

  double real(const char* key, double fallback) {
    double v = fallback;
    if (has(key)) {
      if (!j_.at(key).is_number()) bad(key, "expected number");
      v = j_.at(key).get<double>();
    }
    used[key] = v;
    return v;
  }

  std::optional<double> maybe_real(const char* key) {
    if (!has(key)) return std::nullopt;
    return real(key, 0.0);
  }

  bool flag(const char* key, bool fallback) {
    bool v = fallback;
    if (has(key)) {
      if (!j_.at(key).is_boolean()) bad(key, "expected boolean");
      v = j_.at(key).get<bool>();
    }
    used[key] = v;
    return v;
  }

  std::string text(const char* key, const std::string& fallback) {
    std::string v = fallback;
    if (has(key)) {
      if (!j_.at(key).is_string()) bad(key, "expected string");
      v = j_.at(key).get<std::string>();
    }
    used[key] = v;
    return v;
  }

  json object(const char* key, json fallback) {
    json v = has(key) ? j_.at(key) : std::move(fallback);
    if (!v.is_object()) bad(key, "expected object");
    used[key] = v;
    return v;
  }

  json array(const char* key, json fallback) {
    json v = has(key) ? j_.at(key) : std::move(fallback);
    if (!v.is_array()) bad(key, "expected array");
    used[key] = v;
    return v;
  }

  std::vector<cplx> complex_list(const char* key) {
    if (!has(key)) bad(key, "required");
    try {
      auto v = complex_vector_from_json(j_.at(key));
      used[key] = j_.at(key);
      return v;
    } catch (const Error& e) {
      bad(key, e.what());
    }
  }

  std::vector<int> int_list(const char* key, std::vector<int> fallback) {
    json v = array(key, json(fallback));
    std::vector<int> out;
    for (const auto& x : v) {
      if (!x.is_number_integer()) bad(key, "expected integers");
      out.push_back(x.get<int>());
    }
    return out;
  }

  std::vector<double> real_list(const char* key, std::vector<double> fallback) {
    json v = array(key, json(fallback));
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) bad(key, "expected numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  [[noreturn]] void bad(const std::string& key, const std::string& what) const { config_error(path_ + "." + key, what); }

  const std::string& path() const { return path_; }

  json used = json::object();

 private:
  const json& j_;
  std::string path_;
};

struct Context {
  const RunConfig& config;
  std::size_t guard;

  BasisPtr basis(int modes, int cutoff, const std::string& path) const {
    if (modes < 1) config_error(path + ".modes", "must be at least 1");
    if (cutoff < 0) config_error(path + ".cutoff", "must be non-negative");
    const std::size_t n = basis_size(modes, cutoff);
    if (n > guard) {
      config_error(path, "basis of " + std::to_string(modes) + " modes at cutoff " + std::to_string(cutoff) + " has " +
                             std::to_string(n) + " states, above the memory guard of " + std::to_string(guard) +
                             "; pass --override-memory-guard to allow it");
    }
    return build_basis(modes, cutoff, BasisOptions{guard});
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

MeasureSpec measure_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) config_error(path, "expected a measure object");
  check_fields(j, {{"kind", "string", ""},
                   {"modes", "integer", ""},
                   {"k", "number", ""},
                   {"l", "integer", ""},
                   {"p", "integer", ""},
                   {"q", "integer", ""},
                   {"corrected_exponent", "boolean", ""},
                   {"scale", "number", ""}},
               path);
  MeasureSpec m;
  if (!j.contains("kind")) config_error(path + ".kind", "required");
  try {
    m.kind = parse_measure_kind(j.at("kind").get<std::string>());
  } catch (const Error& e) {
    config_error(path + ".kind", e.what());
  }
  m.modes = j.value("modes", 1);
  m.k = j.value("k", 0.5);
  m.l = j.value("l", 0);
  m.p = j.value("p", 1);
  m.q = j.value("q", 1);
  m.corrected_exponent = j.value("corrected_exponent", false);
  m.scale = j.value("scale", 1.0);
  if (m.kind == MeasureKind::FujiiK) m.q = 1;
  if (m.kind == MeasureKind::UpqZ || m.kind == MeasureKind::FujiiK) m.modes = m.p + m.q;
  return m;
}

// ---- relations / casimir ---------------------------------------------------

void run_relations(const Context& ctx, Params& p, SuiteBlock& block) {
  const auto algebra_name = p.text("algebra", "sp");
  AlgebraName algebra;
  try {
    algebra = parse_algebra_name(algebra_name);
  } catch (const Error& e) {
    p.bad("algebra", e.what());
  }
  RelationParams rp;
  int modes = ctx.config.modes;
  if (algebra == AlgebraName::Upq) {
    rp.p = p.integer("p", 1, 1);
    rp.q = p.integer("q", std::max(1, p.has("modes") ? p.integer("modes", 2) - rp.p : 1), 1);
    modes = rp.p + rp.q;
    if (p.has("modes") && p.integer("modes", modes) != modes) p.bad("modes", "must equal p + q");
    p.used["modes"] = modes;
  } else if (algebra == AlgebraName::Su11) {
    modes = p.integer("modes", 1, 1, 1);
  } else {
    modes = p.integer("modes", modes, 1);
  }
  const int cutoff = p.integer("cutoff", ctx.config.cutoff, 0);
  rp.interior_margin = p.integer("margin", 4, 0, cutoff);
  const double tol = p.real("tolerance", ctx.config.tolerance);
  const auto basis = ctx.basis(modes, cutoff, p.path());

  VerificationReport r;
  r.check = "relations " + to_string(algebra);
  r.parameters = {{"modes", modes}, {"cutoff", cutoff}, {"margin", rp.interior_margin}};
  if (algebra == AlgebraName::Upq) {
    r.parameters["p"] = rp.p;
    r.parameters["q"] = rp.q;
  }
  for (const auto& line : relations_suite(algebra, rp, basis)) {
    r.lines.push_back(assert_line(line.label, line.worst_residual, tol));
    r.data[line.label] = {{"cases", line.cases}, {"worst_case", line.worst_case}};
  }
  block.reports.push_back(std::move(r));
}

void run_casimir(const Context& ctx, Params& p, SuiteBlock& block) {
  const int cutoff = p.integer("cutoff", ctx.config.cutoff, 0);
  const int margin = p.integer("margin", 4, 0, cutoff);
  const double tol = p.real("tolerance", ctx.config.tolerance);
  const auto basis = ctx.basis(1, cutoff, p.path());
  VerificationReport r;
  r.check = "casimir su11";
  r.parameters = {{"cutoff", cutoff}, {"margin", margin}};
  r.lines.push_back(assert_line("(C2 + 3/16) on interior states", casimir_su11_check(basis, margin), tol));
  block.reports.push_back(std::move(r));
}

// ---- eigenstates ---------------------------------------------------------------

struct EigenTarget {
  std::string label;
  GeneratorSpec op;
  cplx eigenvalue;
  double budget;
};

std::string pair_label(const char* name, int i, int j) {
  return std::string(name) + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

SquaredCatParams squared_params(const json& c) {
  SquaredCatParams s{complex_vector_from_json(c.at("alpha")), complex_from_json(c.value("c_plus", json(1.0))),
                     complex_from_json(c.value("c_minus", json(0.0))), complex_from_json(c.value("d_plus", json(1.0))),
                     complex_from_json(c.value("d_minus", json(0.0)))};
  return s;
}

VerificationReport eigen_case(const Context& ctx, const json& c, const std::string& path, double factor, double tol) {
  if (!c.is_object() || !c.contains("family")) config_error(path, "state record needs a \"family\" field");
  const auto family = c.at("family").get<std::string>();
  const int cutoff = c.value("cutoff", ctx.config.cutoff);

  VerificationReport r;
  r.check = "eigen " + family;
  r.parameters = c;
  std::vector<EigenTarget> targets;

  if (family == "bg_su11") {
    const BGParams bg{complex_from_json(c.at("z")), c.at("k").get<double>()};
    const auto basis = ctx.basis(1, cutoff, path);
    const auto state = construct_state(c, basis);
    const double budget = factor * std::abs(bg.z) * std::sqrt(bg_su11_tail(bg, cutoff - 1));
    const auto res = eigen_check(GeneratorSpec::su_k_minus(bg.k), state, bg.z);
    r.lines.push_back(assert_line("SuKm eigenvalue z", res.residual, tol, budget));
    return r;
  }

  if (!c.contains("alpha")) config_error(path + ".alpha", "required");
  const auto alpha = complex_vector_from_json(c.at("alpha"));
  const int modes = static_cast<int>(alpha.size());
  if (c.contains("modes") && c.at("modes").get<int>() != modes) config_error(path + ".modes", "must equal len(alpha)");
  const auto basis = ctx.basis(modes, cutoff, path);
  const double mean = squared_norm(alpha);

  double coef_sum = 1.0;
  int degree = 2;
  bool squared = false;
  StateVector state(basis);
  if (family == "glauber") {
    state = construct_state(c, basis);
  } else if (family == "cat" || family == "even" || family == "odd" || family == "phi_cat") {
    CatParams cat;
    if (family == "cat") {
      cat = {alpha, complex_from_json(c.at("c_plus")), complex_from_json(c.at("c_minus"))};
    } else if (family == "even") {
      cat = even_cs(alpha);
    } else if (family == "odd") {
      cat = odd_cs(alpha);
    } else {
      int sign = +1;
      if (c.contains("sign")) sign = (c.at("sign") == "-" || c.at("sign") == -1) ? -1 : +1;
      cat = cat_of({alpha, c.at("phi").get<double>(), sign});
    }
    coef_sum = std::abs(cat.c_plus) + std::abs(cat.c_minus);
    state = construct_state(c, basis);
  } else if (family == "squared_cat") {
    auto sq = squared_params(c);
    if (c.value("normalize", false)) sq = normalize_squared_cat(sq, basis);
    StateOptions opt;
    opt.force = c.value("force", false);
    state = squared_amp_cat(sq, basis, opt);
    coef_sum = (std::abs(sq.d_plus) + std::abs(sq.d_minus)) * (std::abs(sq.c_plus) + std::abs(sq.c_minus));
    degree = 4;
    squared = true;
  } else {
    config_error(path + ".family", "no eigenvalue equation for family '" + family +
                                       "' (expected glauber, cat, even, odd, phi_cat, squared_cat, bg_su11)");
  }

  if (family == "glauber") {
    for (int i = 1; i <= modes; ++i) {
      const cplx lam = alpha[i - 1];
      targets.push_back({"a(" + std::to_string(i) + ")", GeneratorSpec::annihilate(i), lam,
                         factor * shell_tail_budget(std::abs(lam), 1.0, mean, cutoff, 1)});
    }
  }
  for (int i = 1; i <= modes; ++i) {
    for (int j = i; j <= modes; ++j) {
      cplx lam = alpha[i - 1] * alpha[j - 1];
      GeneratorSpec op = GeneratorSpec::e(i, j);
      std::string label = pair_label("E", i, j);
      if (squared) {
        lam *= lam;
        op = GeneratorSpec::product({op, op});
        label = "E(" + std::to_string(i) + "," + std::to_string(j) + ")^2";
      }
      targets.push_back({label, op, lam, factor * shell_tail_budget(std::abs(lam), coef_sum, mean, cutoff, degree)});
    }
  }

  std::vector<EigenCheck> results(targets.size());
  parallel_for(targets.size(), [&](std::size_t t) { results[t] = eigen_check(targets[t].op, state, targets[t].eigenvalue); });
  for (std::size_t t = 0; t < targets.size(); ++t) {
    r.lines.push_back(assert_line(targets[t].label, results[t].residual, tol, targets[t].budget));
  }
  return r;
}

Eigen::MatrixXcd complex_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) config_error(path, "expected a square matrix");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) config_error(path, "expected a square matrix");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_from_json(row.at(static_cast<std::size_t>(c)));
  }
  return m;
}

void run_eigenstates(const Context& ctx, Params& p, SuiteBlock& block) {
  const double factor = p.real("budget_factor", 10.0);
  const double tol = p.real("tolerance", 1e-13);
  json defaults = json::object();
  if (p.has("modes")) defaults["modes"] = p.integer("modes", 1);
  defaults["cutoff"] = p.integer("cutoff", ctx.config.cutoff, 0);
  const json cases = p.array("cases", json::array());
  for (std::size_t n = 0; n < cases.size(); ++n) {
    json c = cases[n];
    for (const auto& [k, v] : defaults.items()) {
      if (c.is_object() && !c.contains(k)) c[k] = v;
    }
    const std::string path = p.path() + ".cases[" + std::to_string(n) + "]";
    block.reports.push_back(eigen_case(ctx, c, path, factor, tol));
  }
  const json analytic = p.array("analytic_rep", json::array());
  for (const auto& a : analytic) block.reports.push_back(analytic_rep_check(a.value("k", 0.5), a.value("max_degree", 12)));
  const json phi = p.array("phi_rep", json::array());
  for (const auto& a : phi) {
    int sign = +1;
    if (a.contains("sign")) sign = (a.at("sign") == "-" || a.at("sign") == -1) ? -1 : +1;
    block.reports.push_back(phi_rep_check(a.value("phi", 0.0), sign, a.value("max_degree", 10)));
  }
  const json fact = p.array("factorization", json::array());
  for (std::size_t n = 0; n < fact.size(); ++n) {
    const std::string path = p.path() + ".factorization[" + std::to_string(n) + "]";
    if (!fact[n].is_object() || !fact[n].contains("z")) config_error(path + ".z", "required");
    const auto z = complex_matrix(fact[n].at("z"), path + ".z");
    const auto f = factorization_check(z);
    VerificationReport r;
    r.check = "factorization";
    r.parameters = fact[n];
    r.data = {{"factorizable", f.factorizable},
              {"alpha", complex_vector_to_json(f.alpha)},
              {"certificate", f.certificate},
              {"gauge", f.gauge_note}};
    if (fact[n].contains("expect_factorizable")) {
      const bool expect = fact[n].at("expect_factorizable").get<bool>();
      r.lines.push_back(assert_line("verdict mismatch", f.factorizable == expect ? 0.0 : 1.0, 0.0));
    }
    r.lines.push_back(probe_line("worst z_ij z_kl violation", f.worst_violation));
    block.reports.push_back(std::move(r));
  }
}

// ---- resolution ---------------------------------------------------------------

MeasureSpec default_measure(const FamilySpec& f, int modes) {
  MeasureSpec m;
  m.modes = modes;
  switch (f.kind) {
    case FamilyKind::BGSu11:
      m.kind = MeasureKind::BGSu11;
      m.k = f.k;
      break;
    case FamilyKind::UpqAlpha:
      m.kind = MeasureKind::UpqAlpha;
      break;
    case FamilyKind::UpqZ:
      m.kind = MeasureKind::UpqZ;
      m.p = f.p;
      m.q = f.q;
      m.l = f.l;
      m.corrected_exponent = true;
      break;
    default:
      m.kind = MeasureKind::GaussianGlauber;
  }
  return m;
}

std::vector<std::size_t> probe_up_to(const FockBasis& basis, int max_total) {
  std::vector<std::size_t> probe;
  for (std::size_t n = 0; n < basis.size(); ++n) {
    if (basis.at(n).total() <= max_total) probe.push_back(n);
  }
  return probe;
}

void run_resolution_case(const Context& ctx, const json& c, const std::string& path, SuiteBlock& block) {
  check_fields(c,
               {{"family", "string", ""},
                {"phi", "number", ""},
                {"sign", "", ""},
                {"k", "number", ""},
                {"p", "integer", ""},
                {"q", "integer", ""},
                {"l", "integer", ""},
                {"modes", "integer", ""},
                {"cutoff", "integer", ""},
                {"measure", "object", ""},
                {"probe_max_total", "integer", ""},
                {"full_identity", "boolean", ""},
                {"tolerance", "number", ""},
                {"control_threshold", "number", ""},
                {"report_only", "boolean", ""},
                {"radial_order", "integer", ""},
                {"angular_order", "integer", ""},
                {"corrected_exponent", "boolean", ""}},
               path);
  if (!c.contains("family")) config_error(path + ".family", "required");
  FamilySpec f;
  try {
    f.kind = parse_family_kind(c.at("family").get<std::string>());
  } catch (const Error& e) {
    config_error(path + ".family", e.what());
  }
  f.phi = c.value("phi", 0.0);
  if (c.contains("sign")) f.sign = (c.at("sign") == "-" || c.at("sign") == -1) ? -1 : +1;
  f.k = c.value("k", 0.5);
  f.p = c.value("p", 1);
  f.q = c.value("q", 1);
  f.l = c.value("l", 0);

  const bool upq = f.kind == FamilyKind::UpqAlpha || f.kind == FamilyKind::UpqZ;
  int modes = c.value("modes", ctx.config.modes);
  if (upq) modes = f.p + f.q;
  if (f.kind == FamilyKind::BGSu11 || f.kind == FamilyKind::EvenNormalized || f.kind == FamilyKind::OddNormalized) {
    modes = c.value("modes", 1);
  }
  const int cutoff = c.value("cutoff", ctx.config.cutoff);
  const auto basis = ctx.basis(modes, cutoff, path);

  MeasureSpec m = c.contains("measure") ? measure_from_json(c.at("measure"), path + ".measure") : default_measure(f, modes);
  if (c.contains("corrected_exponent")) m.corrected_exponent = c.at("corrected_exponent").get<bool>();

  ResolutionOptions o;
  o.radial_order = c.value("radial_order", ctx.config.radial_order);
  o.angular_order = c.value("angular_order", ctx.config.angular_order);
  o.full_identity = c.value("full_identity", false);
  if (c.contains("probe_max_total")) o.probe = probe_up_to(*basis, c.at("probe_max_total").get<int>());

  const double tol = c.value("tolerance", 1e-10);
  const bool report_only = c.value("report_only", false);
  const auto rr = resolve_identity(f, m, basis, o);

  VerificationReport r;
  r.check = "resolve-identity " + to_string(f.kind);
  r.parameters = c;
  r.data = to_json(rr);
  const auto check = [&](const std::string& label, double value) {
    r.lines.push_back(report_only ? probe_line(label, value) : assert_line(label, value, tol));
  };
  const bool parity = f.kind == FamilyKind::EvenProjection || f.kind == FamilyKind::OddProjection ||
                      f.kind == FamilyKind::EvenNormalized || f.kind == FamilyKind::OddNormalized;
  if (o.full_identity && parity) {
    const double threshold = c.value("control_threshold", 0.5);
    const double dev = opposite_parity_deviation(rr, *basis, f.kind);
    r.lines.push_back(report_only ? probe_line("opposite-parity diagonal deviation", dev)
                                  : control_line("opposite-parity diagonal deviation", dev, threshold));
    r.lines.push_back(probe_line("gram deviation from identity", rr.gram_deviation));
  } else {
    check("gram deviation from " + rr.expected, rr.gram_deviation);
  }
  check("gram hermiticity", rr.hermiticity);
  check("negative part of gram spectrum", std::max(0.0, -rr.min_eigenvalue));
  block.reports.push_back(std::move(r));
  block.tables.push_back(gram_csv("gram_" + to_string(f.kind) + ".csv", rr));
}

void run_resolve_identity(const Context& ctx, Params& p, SuiteBlock& block) {
  json defaults = json::object();
  if (p.has("modes")) defaults["modes"] = p.integer("modes", 1);
  if (p.has("cutoff")) defaults["cutoff"] = p.integer("cutoff", 0);
  const json cases = p.array("cases", json::array());
  if (cases.empty()) p.bad("cases", "needs at least one family record");
  for (std::size_t n = 0; n < cases.size(); ++n) {
    json c = cases[n];
    const std::string path = p.path() + ".cases[" + std::to_string(n) + "]";
    if (!c.is_object()) config_error(path, "expected an object");
    for (const auto& [k, v] : defaults.items()) {
      if (!c.contains(k)) c[k] = v;
    }
    run_resolution_case(ctx, c, path, block);
  }
}

// ---- u(p,q) ---------------------------------------------------------------------

struct UpqSetup {
  std::vector<cplx> alpha;
  int p = 1;
  int q = 1;
  int cutoff = 0;
};

UpqSetup upq_setup(const Context& ctx, Params& p) {
  UpqSetup s;
  s.alpha = p.complex_list("alpha");
  const int n = static_cast<int>(s.alpha.size());
  if (n < 2) p.bad("alpha", "needs at least two modes");
  s.p = p.integer("p", 1, 1, n - 1);
  s.q = p.integer("q", n - s.p, 1);
  if (s.p + s.q != n) p.bad("q", "p + q must equal len(alpha)");
  if (p.has("modes") && p.integer("modes", n) != n) p.bad("modes", "must equal len(alpha)");
  s.cutoff = p.integer("cutoff", ctx.config.cutoff, 0);
  return s;
}

void run_sectors(const Context& ctx, Params& p, SuiteBlock& block) {
  const auto s = upq_setup(ctx, p);
  const auto ls = p.int_list("ls", {-2, -1, 0, 1, 2});
  const bool resolution = p.flag("resolution", true);
  const double rtol = p.real("resolution_tolerance", 1e-8);
  const int probe_max = p.integer("probe_max_total", 6, 0);
  const auto basis = ctx.basis(s.p + s.q, s.cutoff, p.path());
  block.reports.push_back(sector_structure_check(s.alpha, s.p, s.q, ls, basis));
  block.reports.push_back(sector_orthogonality_check(s.alpha, s.p, s.q, ls, basis));
  if (!resolution) return;
  const auto probe_basis = ctx.basis(s.p + s.q, std::min(s.cutoff, probe_max), p.path());
  for (int l : ls) {
    FamilySpec f{FamilyKind::UpqAlpha, 0.0, +1, 0.5, s.p, s.q, l};
    MeasureSpec m;
    m.kind = MeasureKind::GaussianGlauber;
    m.modes = s.p + s.q;
    ResolutionOptions o;
    o.radial_order = ctx.config.radial_order;
    o.angular_order = ctx.config.angular_order;
    const auto rr = resolve_identity(f, m, probe_basis, o);
    VerificationReport r;
    r.check = "resolve-identity " + to_string(f.kind);
    r.parameters = {{"p", s.p}, {"q", s.q}, {"l", l}, {"probe_max_total", probe_basis->cutoff()}};
    r.data = to_json(rr);
    r.lines.push_back(assert_line("gram deviation from " + rr.expected, rr.gram_deviation, rtol));
    r.lines.push_back(assert_line("negative part of gram spectrum", std::max(0.0, -rr.min_eigenvalue), rtol));
    block.reports.push_back(std::move(r));
    block.tables.push_back(gram_csv("gram_upq_alpha_l" + std::to_string(l) + ".csv", rr));
  }
}

void run_reconstruction(const Context& ctx, Params& p, SuiteBlock& block) {
  const auto s = upq_setup(ctx, p);
  const int l_min = p.integer("l_min", -s.cutoff);
  const int l_max = p.integer("l_max", s.cutoff);
  if (l_min > l_max) p.bad("l_min", "must not exceed l_max");
  const auto drop = p.maybe_integer("drop");
  const auto basis = ctx.basis(s.p + s.q, s.cutoff, p.path());
  block.reports.push_back(glauber_reconstruction_check(s.alpha, s.p, s.q, l_min, l_max, basis, drop));
}

// ---- probes ---------------------------------------------------------------------

void run_measure_uniqueness(const Context&, Params& p, SuiteBlock& block) {
  const json a_json = p.object("a", {{"kind", "upq_z"}, {"l", -2}, {"p", 1}, {"q", 1}});
  const json b_json = p.object("b", {{"kind", "fujii_k"}, {"l", -2}, {"p", 1}});
  const auto a = measure_from_json(a_json, p.path() + ".a");
  const auto b = measure_from_json(b_json, p.path() + ".b");
  if (a.radial_dims() != b.radial_dims()) p.bad("b", "both measures must take the same number of radii");
  const json deg_json = p.array("degrees", json{{0}, {1}, {2}, {3}, {4}});
  std::vector<std::vector<int>> degrees;
  for (const auto& d : deg_json) {
    if (!d.is_array() || static_cast<int>(d.size()) != a.radial_dims()) {
      p.bad("degrees", "each tuple needs " + std::to_string(a.radial_dims()) + " entries");
    }
    std::vector<int> t;
    for (const auto& x : d) {
      if (!x.is_number_integer() || x.get<int>() < 0) p.bad("degrees", "expected non-negative integers");
      t.push_back(x.get<int>());
    }
    degrees.push_back(std::move(t));
  }
  if (degrees.empty()) p.bad("degrees", "needs at least one tuple");
  const auto spread_tol = p.maybe_real("spread_tolerance");

  const auto probe = measure_uniqueness_probe(a, b, degrees);
  VerificationReport r;
  r.check = "measure-uniqueness";
  r.parameters = {{"a", measure_to_json(a)}, {"b", measure_to_json(b)}, {"degrees", degrees}};
  json rows = json::array();
  for (std::size_t n = 0; n < degrees.size(); ++n) {
    std::string tag;
    for (int d : degrees[n]) tag += (tag.empty() ? "" : ",") + std::to_string(d);
    r.lines.push_back(probe_line("moment ratio a/b at (" + tag + ")", probe.ratios[n]));
    rows.push_back({{"degree", degrees[n]},
                    {"moment_a", probe.moments_a[n]},
                    {"moment_b", probe.moments_b[n]},
                    {"difference", probe.differences[n]},
                    {"ratio", probe.ratios[n]}});
  }
  r.data["moments"] = rows;
  r.lines.push_back(spread_tol ? assert_line("relative spread of moment ratios", probe.ratio_spread, *spread_tol)
                               : probe_line("relative spread of moment ratios", probe.ratio_spread));
  block.reports.push_back(std::move(r));
}

void run_bessel_check(const Context&, Params& p, SuiteBlock& block) {
  const auto nus = p.int_list("nu", {0, 1, 2, 3});
  const auto zs = p.real_list("z", {0.5, 1.0, 2.0});
  const bool identities = p.flag("identities", false);
  for (int nu : nus) {
    if (nu < 0) p.bad("nu", "orders must be non-negative");
  }
  for (double z : zs) {
    if (!(z > 0.0)) p.bad("z", "arguments must be positive");
  }

  VerificationReport r;
  r.check = "bessel-check";
  r.parameters = {{"nu", nus}, {"z", zs}};
  for (int nu : nus) {
    for (double z : zs) {
      const auto k = knu_integral_probe(nu, z);
      const std::string tag = "nu=" + std::to_string(nu) + " z=" + fmt(z);
      r.lines.push_back(probe_line("rhs/lhs " + tag, k.ratio));
      r.lines.push_back(assert_line("Mellin form rel. error " + tag, k.classical_rel_error, 1e-9));
    }
  }
  block.reports.push_back(std::move(r));
  block.tables.push_back(bessel_check_table(nus, zs));

  if (!identities) return;
  VerificationReport id;
  id.check = "bessel identities";
  double wronskian = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 5; ++b) {
      const double nu = 0.5 * a + 0.25 * b;
      const double x = 0.3 + 1.7 * b + 0.9 * a;
      const double w = bessel_i(nu, x) * bessel_k(nu + 1, x) + bessel_i(nu + 1, x) * bessel_k(nu, x);
      wronskian = std::max(wronskian, std::abs(w * x - 1.0));
    }
  }
  id.lines.push_back(assert_line("x (I_nu K_nu+1 + I_nu+1 K_nu) - 1 on 20 points", wronskian, 1e-10));
  double half = 0.0;
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) {
    const double exact = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
    half = std::max(half, std::abs(bessel_k(0.5, x) / exact - 1.0));
  }
  id.lines.push_back(assert_line("K_1/2 closed form rel. error", half, 1e-10));
  for (double k : {0.5, 1.0}) {
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n) {
      const double exact = std::exp(ln_gamma(n + 1.0) + ln_gamma(2.0 * k + n));
      worst = std::max(worst, std::abs(bg_moment(k, n) / exact - 1.0));
    }
    id.lines.push_back(assert_line("BG moment n! Gamma(2k+n) rel. error k=" + fmt(k), worst, 1e-8));
  }
  block.reports.push_back(std::move(id));
}

void run_variance(const Context& ctx, Params& p, SuiteBlock& block) {
  const double tol = p.real("tolerance", ctx.config.tolerance);
  json defaults = json::object();
  if (p.has("modes")) defaults["modes"] = p.integer("modes", 1);
  defaults["cutoff"] = p.integer("cutoff", ctx.config.cutoff, 0);
  const json cases = p.array("cases", json::array());
  if (cases.empty()) p.bad("cases", "needs at least one state record");
  for (std::size_t n = 0; n < cases.size(); ++n) {
    json c = cases[n];
    const std::string path = p.path() + ".cases[" + std::to_string(n) + "]";
    if (!c.is_object()) config_error(path, "expected an object");
    for (const auto& [k, v] : defaults.items()) {
      if (!c.contains(k)) c[k] = v;
    }
    int modes = c.value("modes", ctx.config.modes);
    if (c.contains("alpha")) modes = static_cast<int>(c.at("alpha").size());
    if (c.contains("occupations")) modes = static_cast<int>(c.at("occupations").size());
    const auto basis = ctx.basis(modes, c.at("cutoff").get<int>(), path);
    const auto state = construct_state(c, basis);
    const int i = c.value("i", 1);
    const int j = c.value("j", 1);
    if (i < 1 || i > modes || j < 1 || j > modes) config_error(path, "mode indices i, j out of range");
    const auto v = variance_equality_report(state, i, j);
    VerificationReport r;
    r.check = "variance " + c.at("family").get<std::string>();
    r.parameters = c;
    r.data = {{"var_x", v.var_x}, {"var_y", v.var_y}, {"mean_e", complex_vector_to_json(std::vector<cplx>{v.mean_e})}};
    const std::string label = "|Var X - Var Y| for " + pair_label("E", i, j);
    r.lines.push_back(c.value("control", false) ? probe_line(label, std::abs(v.difference))
                                                : assert_line(label, std::abs(v.difference), tol, v.budget));
    block.reports.push_back(std::move(r));
  }
}

using Runner = void (*)(const Context&, Params&, SuiteBlock&);

Runner runner_for(const std::string& name) {
  static const std::map<std::string, Runner> table{
      {"relations", &run_relations},
      {"casimir", &run_casimir},
      {"eigenstates", &run_eigenstates},
      {"resolve-identity", &run_resolve_identity},
      {"sectors", &run_sectors},
      {"reconstruction", &run_reconstruction},
      {"measure-uniqueness", &run_measure_uniqueness},
      {"bessel-check", &run_bessel_check},
      {"variance", &run_variance},
  };
  const auto it = table.find(name);
  if (it == table.end()) fail(ErrorCode::Config, "unknown suite '" + name + "' (available: " + catalog_names() + ")");
  return it->second;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace

json RunConfig::echo() const {
  json suites_json = json::array();
  for (const auto& s : suites) suites_json.push_back({{"name", s.name}, {"params", s.params}});
  return {{"basis", {{"modes", modes}, {"cutoff", cutoff}}},
          {"quadrature", {{"radial_order", radial_order}, {"angular_order", angular_order}}},
          {"tolerance", tolerance},
          {"suites", suites_json},
          {"output", {{"directory", output_directory}, {"formats", formats}}},
          {"override_memory_guard", override_memory_guard}};
}

const std::vector<SuiteInfo>& suite_catalog() {
  static const std::vector<SuiteInfo> catalog = [] {
    std::vector<SuiteInfo> out;
    for (const auto& s : schemas()) {
      json params = json::object();
      for (const auto& f : s.fields) params[f.key] = {{"type", f.type}, {"description", f.about}};
      out.push_back({s.name, s.summary, params});
    }
    return out;
  }();
  return catalog;
}

RunConfig parse_config(const json& j, bool override_memory_guard) {
  if (!j.is_object()) config_error("config", "expected a JSON object");
  check_fields(j,
               {{"basis", "object", ""},
                {"quadrature", "object", ""},
                {"tolerance", "number", ""},
                {"suites", "array", ""},
                {"output", "object", ""},
                {"override_memory_guard", "boolean", ""}},
               "config");
  RunConfig c;
  if (j.contains("basis")) {
    const auto& b = j.at("basis");
    check_fields(b, {{"modes", "integer", ""}, {"cutoff", "integer", ""}}, "basis");
    c.modes = b.value("modes", c.modes);
    c.cutoff = b.value("cutoff", c.cutoff);
    if (c.modes < 1) config_error("basis.modes", "must be at least 1");
    if (c.cutoff < 0) config_error("basis.cutoff", "must be non-negative");
  }
  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    check_fields(q, {{"radial_order", "integer", ""}, {"angular_order", "integer", ""}}, "quadrature");
    c.radial_order = q.value("radial_order", c.radial_order);
    c.angular_order = q.value("angular_order", c.angular_order);
    if (c.radial_order < 1) config_error("quadrature.radial_order", "must be positive");
    if (c.angular_order < 2) config_error("quadrature.angular_order", "must be at least 2");
  }
  c.tolerance = j.value("tolerance", c.tolerance);
  if (!(c.tolerance > 0.0)) config_error("tolerance", "must be positive");
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_fields(o, {{"directory", "string", ""}, {"formats", "array", ""}}, "output");
    c.output_directory = o.value("directory", c.output_directory);
    if (o.contains("formats")) {
      c.formats.clear();
      for (const auto& f : o.at("formats")) {
        if (!f.is_string()) config_error("output.formats", "expected strings");
        const auto name = f.get<std::string>();
        if (name != "json" && name != "txt" && name != "csv") {
          config_error("output.formats", "unknown format '" + name + "' (expected json, txt, csv)");
        }
        c.formats.push_back(name);
      }
    }
  }
  c.override_memory_guard = override_memory_guard || j.value("override_memory_guard", false);

  if (!j.contains("suites") || j.at("suites").empty()) config_error("suites", "at least one suite is required");
  const auto& suites = j.at("suites");
  const std::size_t guard = c.override_memory_guard ? SIZE_MAX : BasisOptions{}.max_size;
  for (std::size_t n = 0; n < suites.size(); ++n) {
    const std::string path = "suites[" + std::to_string(n) + "]";
    const auto& s = suites[n];
    if (s.is_string()) {
      c.suites.push_back({s.get<std::string>(), json::object()});
    } else {
      check_fields(s, {{"name", "string", ""}, {"params", "object", ""}}, path);
      if (!s.contains("name")) config_error(path + ".name", "required");
      c.suites.push_back({s.at("name").get<std::string>(), s.value("params", json::object())});
    }
    const auto& req = c.suites.back();
    const Schema* schema = find_schema(req.name);
    if (!schema) config_error(path + ".name", "unknown suite '" + req.name + "' (available: " + catalog_names() + ")");
    check_fields(req.params, schema->fields, path + ".params");
    const int modes = req.params.value("modes", c.modes);
    const int cutoff = req.params.value("cutoff", c.cutoff);
    if (modes >= 1 && cutoff >= 0 && basis_size(modes, cutoff) > guard) {
      config_error(path, "basis of " + std::to_string(modes) + " modes at cutoff " + std::to_string(cutoff) +
                             " exceeds the memory guard of " + std::to_string(guard) +
                             " states; pass --override-memory-guard to allow it");
    }
  }
  return c;
}

RunConfig parse_config_text(const std::string& text, bool override_memory_guard) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j, override_memory_guard);
}

RunConfig parse_config_file(const std::string& path, bool override_memory_guard) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), override_memory_guard);
}

SuiteBlock run_suite(const RunConfig& config, const SuiteRequest& request) {
  const auto run = runner_for(request.name);
  const auto start = std::chrono::steady_clock::now();
  const Context ctx{config, config.override_memory_guard ? SIZE_MAX : BasisOptions{}.max_size};
  Params params(request.params, request.name);
  SuiteBlock block;
  block.suite = request.name;
  try {
    run(ctx, params, block);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, request.name + ": " + e.what());
  }
  block.params = params.used;
  block.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return block;
}

bool RunResult::passed() const {
  return std::all_of(blocks.begin(), blocks.end(), [](const SuiteBlock& b) { return b.passed(); });
}

RunResult run_config(const RunConfig& config) {
  RunResult r;
  for (const auto& s : config.suites) r.blocks.push_back(run_suite(config, s));
  return r;
}

std::string report_json(const RunConfig& config, const RunResult& result) {
  json blocks = json::array();
  for (const auto& b : result.blocks) blocks.push_back(to_json(b));
  const json j{{"fockforge", kVersion}, {"config", config.echo()}, {"suites", blocks}, {"pass", result.passed()}};
  return j.dump(2) + "\n";
}

CsvTable bessel_check_table(const std::vector<int>& nus, const std::vector<double>& zs) {
  CsvTable t{"bessel_check.csv", {"nu", "z", "lhs", "rhs", "ratio"}, {}};
  for (int nu : nus) {
    for (double z : zs) {
      const auto k = knu_integral_probe(nu, z);
      t.rows.push_back({std::to_string(nu), format_double(z), format_double(k.lhs), format_double(k.rhs),
                        format_double(k.ratio)});
    }
  }
  return t;
}

void emit_report(const RunConfig& config, const RunResult& result, const std::string& directory,
                 const std::vector<std::string>& formats) {
  namespace fs = std::filesystem;
  const auto started = utc_now();
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + directory + ": " + ec.message());
  const fs::path dir(directory);
  const auto wants = [&](const char* f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };

  if (wants("json")) write_file(dir / "report.json", report_json(config, result));
  if (wants("txt")) write_file(dir / "report.txt", render_text(result.blocks));
  json tables = json::array();
  if (wants("csv")) {
    std::set<std::string> used;
    for (const auto& b : result.blocks) {
      for (const auto& t : b.tables) {
        std::string name = t.name;
        const auto stem = fs::path(name).stem().string();
        for (int n = 2; used.count(name); ++n) name = stem + "_" + std::to_string(n) + ".csv";
        used.insert(name);
        write_file(dir / name, render_csv(t));
        tables.push_back(name);
      }
    }
  }

  json runtimes = json::array();
  for (const auto& b : result.blocks) runtimes.push_back({{"suite", b.suite}, {"runtime_seconds", b.runtime_seconds}});
  const json meta{{"fockforge", kVersion},
                  {"written_utc", started},
                  {"threads", worker_count()},
                  {"suites", runtimes},
                  {"tables", tables},
                  {"pass", result.passed()}};
  write_file(dir / "metadata.json", meta.dump(2) + "\n");
}

}  // namespace fockforge
