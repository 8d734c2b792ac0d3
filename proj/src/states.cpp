#include "fockforge/states.hpp"

#include <cmath>

#include "fockforge/error.hpp"
#include "fockforge/specfun.hpp"

namespace fockforge {

namespace {

void require_modes(std::span<const cplx> alpha, const FockBasis& basis) {
  if (static_cast<int>(alpha.size()) != basis.modes()) {
    fail(ErrorCode::InvalidArgument, "alpha has " + std::to_string(alpha.size()) + " components but the basis has " +
                                         std::to_string(basis.modes()) + " modes");
  }
  for (const auto& a : alpha) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) fail(ErrorCode::InvalidArgument, "alpha must be finite");
  }
}

void check_tail(std::span<const cplx> alpha, const FockBasis& basis, const StateOptions& options) {
  if (options.force) return;
  const double tail = coherent_tail_bound(alpha, basis.cutoff());
  if (tail > options.tail_tolerance) {
    fail(ErrorCode::TailBound, "coherent tail " + std::to_string(tail) + " exceeds " +
                                   std::to_string(options.tail_tolerance) + "; raise the cutoff to at least " +
                                   std::to_string(required_cutoff(alpha, options.tail_tolerance)));
  }
}

// table[i][n] = alpha_i^n / sqrt(n!)
std::vector<std::vector<cplx>> bargmann_tables(std::span<const cplx> alpha, int cutoff) {
  std::vector<std::vector<cplx>> t(alpha.size(), std::vector<cplx>(static_cast<std::size_t>(cutoff) + 1));
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    t[i][0] = 1.0;
    for (int n = 1; n <= cutoff; ++n) {
      t[i][static_cast<std::size_t>(n)] = t[i][static_cast<std::size_t>(n - 1)] * alpha[i] / std::sqrt(double(n));
    }
  }
  return t;
}

cplx monomial(const std::vector<std::vector<cplx>>& tables, const MultiIndex& n) {
  cplx v = 1.0;
  for (std::size_t i = 0; i < tables.size(); ++i) v *= tables[i][static_cast<std::size_t>(n.occ[i])];
  return v;
}

template <class Weight>
StateVector gaussian_family(std::span<const cplx> alpha, const BasisPtr& basis, Weight weight) {
  const auto tables = bargmann_tables(alpha, basis->cutoff());
  const double pre = std::exp(-0.5 * squared_norm(alpha));
  StateVector::Amplitudes amps;
  for (std::size_t idx = 0; idx < basis->size(); ++idx) {
    const auto& n = basis->at(idx);
    const cplx a = pre * monomial(tables, n) * weight(n);
    if (a != cplx{}) amps.emplace(idx, a);
  }
  return StateVector(basis, std::move(amps));
}

void require_bargmann_index(double k) {
  if (!(k > 0.0) || std::abs(2.0 * k - std::round(2.0 * k)) > 0.0) {
    fail(ErrorCode::InvalidArgument, "Bargmann index must be a positive half-integer, got " + std::to_string(k));
  }
}

}  // namespace

int required_cutoff(std::span<const cplx> alpha, double tolerance) {
  const double mean = squared_norm(alpha);
  int c = 0;
  while (poisson_tail(mean, c) > tolerance) {
    if (++c > 100000) fail(ErrorCode::TailBound, "no practical cutoff meets the tail tolerance");
  }
  return c;
}

StateVector glauber_cs(std::span<const cplx> alpha, const BasisPtr& basis, const StateOptions& options) {
  require_modes(alpha, *basis);
  check_tail(alpha, *basis, options);
  return gaussian_family(alpha, basis, [](const MultiIndex&) { return cplx{1.0, 0.0}; });
}

double cat_norm_defect(const CatParams& p) {
  const double overlap = std::exp(-2.0 * squared_norm(p.alpha));
  return std::norm(p.c_plus) + std::norm(p.c_minus) + 2.0 * std::real(p.c_minus * std::conj(p.c_plus)) * overlap - 1.0;
}

CatParams even_cs(std::vector<cplx> alpha) {
  const double c = 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-2.0 * squared_norm(alpha))));
  return {std::move(alpha), c, c};
}

CatParams odd_cs(std::vector<cplx> alpha) {
  const double r2 = squared_norm(alpha);
  if (r2 == 0.0) fail(ErrorCode::InvalidArgument, "the odd coherent state does not exist at alpha = 0");
  const double c = 1.0 / std::sqrt(2.0 * (-std::expm1(-2.0 * r2)));
  return {std::move(alpha), c, -c};
}

CatParams cat_of(const PhiCatParams& p) {
  if (p.sign != 1 && p.sign != -1) fail(ErrorCode::InvalidArgument, "phi_cat sign must be +1 or -1");
  return {p.alpha, std::cos(p.phi), cplx{0.0, p.sign * std::sin(p.phi)}};
}

StateVector multimode_cat(const CatParams& params, const BasisPtr& basis, const StateOptions& options) {
  require_modes(params.alpha, *basis);
  const double defect = cat_norm_defect(params);
  if (!(std::abs(defect) <= 1e-9)) {
    fail(ErrorCode::Normalization, "cat coefficients violate the normalization condition by " + std::to_string(defect));
  }
  check_tail(params.alpha, *basis, options);
  const cplx even = params.c_plus + params.c_minus;
  const cplx odd = params.c_plus - params.c_minus;
  return gaussian_family(params.alpha, basis, [&](const MultiIndex& n) { return n.total() % 2 == 0 ? even : odd; });
}

StateVector phi_cat(const PhiCatParams& params, const BasisPtr& basis, const StateOptions& options) {
  return multimode_cat(cat_of(params), basis, options);
}

StateVector phi_cat_expansion(const PhiCatParams& params, const BasisPtr& basis) {
  require_modes(params.alpha, *basis);
  if (params.sign != 1 && params.sign != -1) fail(ErrorCode::InvalidArgument, "phi_cat sign must be +1 or -1");
  const cplx even = std::polar(1.0, params.sign * params.phi);
  const cplx odd = std::polar(1.0, -params.sign * params.phi);
  return gaussian_family(params.alpha, basis, [&](const MultiIndex& n) { return n.total() % 2 == 0 ? even : odd; });
}

namespace {

double bg_ln_weight(double r, double k, int n, double ln_s) {
  return 2.0 * n * std::log(r) - ln_gamma(n + 1.0) - ln_gamma(2.0 * k + n) - ln_s;
}

}  // namespace

double bg_su11_tail(const BGParams& params, int cutoff) {
  require_bargmann_index(params.k);
  const double r = std::abs(params.z);
  if (r == 0.0) return 0.0;
  const double ln_s = ln_reduced_bessel_i(2.0 * params.k - 1.0, r * r);
  double sum = 0.0;
  for (int n = cutoff + 1;; ++n) {
    const double term = std::exp(bg_ln_weight(r, params.k, n, ln_s));
    sum += term;
    if ((n > r && term <= 1e-18 * sum) || term == 0.0 || n > cutoff + 100000) break;
  }
  return sum;
}

StateVector bg_su11_cs(const BGParams& params, const BasisPtr& basis, const StateOptions& options) {
  require_bargmann_index(params.k);
  if (basis->modes() != 1) fail(ErrorCode::InvalidArgument, "BG su(1,1) states live on a one-mode ladder basis");
  if (!std::isfinite(params.z.real()) || !std::isfinite(params.z.imag())) {
    fail(ErrorCode::InvalidArgument, "z must be finite");
  }
  if (!options.force) {
    const double tail = bg_su11_tail(params, basis->cutoff());
    if (tail > options.tail_tolerance) {
      int need = basis->cutoff();
      while (bg_su11_tail(params, need) > options.tail_tolerance) ++need;
      fail(ErrorCode::TailBound, "BG tail " + std::to_string(tail) + " exceeds " +
                                     std::to_string(options.tail_tolerance) + "; raise the cutoff to at least " +
                                     std::to_string(need));
    }
  }
  const double r = std::abs(params.z);
  if (r == 0.0) return StateVector(basis, {{0, cplx{1.0, 0.0}}});
  const double k = params.k;
  const double theta = std::arg(params.z);
  const double ln_s = ln_reduced_bessel_i(2.0 * k - 1.0, r * r);
  StateVector::Amplitudes amps;
  for (int n = 0; n <= basis->cutoff(); ++n) {
    const double mag = std::exp(0.5 * bg_ln_weight(r, k, n, ln_s));
    const cplx a = std::polar(mag, (k - 0.5 + n) * theta);
    if (a != cplx{}) amps.emplace(static_cast<std::size_t>(n), a);
  }
  return StateVector(basis, std::move(amps));
}

cplx bg_overlap_closed_form(cplx z1, cplx z2, double k) {
  require_bargmann_index(k);
  const double nu = 2.0 * k - 1.0;
  const double ln_norm = 0.5 * (ln_reduced_bessel_i(nu, std::norm(z1)) + ln_reduced_bessel_i(nu, std::norm(z2)));
  const cplx s = reduced_bessel_i(nu, std::conj(z1) * z2);
  const double phase = (k - 0.5) * (std::arg(z2) - std::arg(z1));
  return std::polar(std::exp(-ln_norm), phase) * s;
}

UpqState upq_bg_cs(const UpqParams& params, const BasisPtr& basis) {
  if (params.p < 1 || params.q < 1) fail(ErrorCode::InvalidArgument, "u(p,q) needs p, q >= 1");
  if (params.p + params.q != basis->modes()) {
    fail(ErrorCode::InvalidArgument, "p + q must equal the basis mode count");
  }
  require_modes(params.alpha, *basis);
  const auto tables = bargmann_tables(params.alpha, basis->cutoff());
  StateVector::Amplitudes amps;
  bool feasible = false;
  for (std::size_t idx = 0; idx < basis->size(); ++idx) {
    const auto& n = basis->at(idx);
    if (sector_of(n, params.p, params.q).l != params.l) continue;
    feasible = true;
    const cplx a = monomial(tables, n);
    if (a != cplx{}) amps.emplace(idx, a);
  }
  UpqState out{StateVector(basis, std::move(amps)), 0.0, !feasible, 0.0};
  out.norm2 = out.state.norm2();
  const double r2 = squared_norm(params.alpha);
  out.tail_budget = std::exp(r2) * coherent_tail_bound(params.alpha, basis->cutoff());
  return out;
}

UpqParams upq_from_reduced(int p, int q, int l, std::span<const cplx> z, cplx alpha_n) {
  if (p < 1 || q < 1) fail(ErrorCode::InvalidArgument, "u(p,q) needs p, q >= 1");
  if (static_cast<int>(z.size()) != p + q - 1) {
    fail(ErrorCode::InvalidArgument, "reduced coordinates need " + std::to_string(p + q - 1) + " components");
  }
  if (alpha_n == cplx{}) fail(ErrorCode::InvalidArgument, "the reduced form needs a nonzero reference amplitude");
  UpqParams out{p, q, l, {}};
  for (int i = 0; i < p + q - 1; ++i) {
    out.alpha.push_back(i < p ? z[static_cast<std::size_t>(i)] / alpha_n : z[static_cast<std::size_t>(i)] * alpha_n);
  }
  out.alpha.push_back(alpha_n);
  return out;
}

namespace {

std::pair<StateVector, StateVector> squared_bases(const SquaredCatParams& p, const BasisPtr& basis,
                                                  const StateOptions& options) {
  std::vector<cplx> rotated;
  for (const auto& a : p.alpha) rotated.push_back(cplx{0.0, 1.0} * a);
  return {multimode_cat({p.alpha, p.c_plus, p.c_minus}, basis, options),
          multimode_cat({rotated, p.c_plus, p.c_minus}, basis, options)};
}

double squared_norm2(const SquaredCatParams& p, const StateVector& a, const StateVector& b) {
  return std::norm(p.d_plus) + std::norm(p.d_minus) + 2.0 * std::real(std::conj(p.d_plus) * p.d_minus * inner_product(a, b));
}

}  // namespace

double squared_cat_norm_defect(const SquaredCatParams& params, const BasisPtr& basis) {
  StateOptions force;
  force.force = true;
  const auto [a, b] = squared_bases(params, basis, force);
  return squared_norm2(params, a, b) - 1.0;
}

SquaredCatParams normalize_squared_cat(SquaredCatParams params, const BasisPtr& basis) {
  StateOptions force;
  force.force = true;
  const auto [a, b] = squared_bases(params, basis, force);
  const double n2 = squared_norm2(params, a, b);
  if (!(n2 > 0.0)) fail(ErrorCode::Normalization, "squared-amplitude cat has zero norm");
  params.d_plus /= std::sqrt(n2);
  params.d_minus /= std::sqrt(n2);
  return params;
}

StateVector squared_amp_cat(const SquaredCatParams& params, const BasisPtr& basis, const StateOptions& options) {
  const auto [a, b] = squared_bases(params, basis, options);
  const double defect = squared_norm2(params, a, b) - 1.0;
  if (!(std::abs(defect) <= 1e-9)) {
    fail(ErrorCode::Normalization, "D coefficients violate the normalization condition by " + std::to_string(defect));
  }
  return added(scaled(params.d_plus, a), scaled(params.d_minus, b));
}

cplx complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_object() && j.contains("re")) return {j.at("re").get<double>(), j.value("im", 0.0)};
  fail(ErrorCode::Parse, "expected a complex number as x, [re, im] or {\"re\":x,\"im\":y}, got " + j.dump());
}

std::vector<cplx> complex_vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) fail(ErrorCode::Parse, "expected an array of complex numbers, got " + j.dump());
  std::vector<cplx> out;
  for (const auto& x : j) out.push_back(complex_from_json(x));
  return out;
}

nlohmann::json complex_vector_to_json(std::span<const cplx> v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back({x.real(), x.imag()});
  return out;
}

namespace {

int sign_from_json(const nlohmann::json& j) {
  if (!j.contains("sign")) return +1;
  const auto& s = j.at("sign");
  if (s.is_string()) {
    const auto v = s.get<std::string>();
    if (v == "+") return +1;
    if (v == "-") return -1;
  } else if (s.is_number_integer() && (s.get<int>() == 1 || s.get<int>() == -1)) {
    return s.get<int>();
  }
  fail(ErrorCode::Parse, "sign must be \"+\" or \"-\"");
}

}  // namespace

StateVector construct_state(const nlohmann::json& j, const BasisPtr& basis) {
  try {
    if (!j.is_object() || !j.contains("family")) fail(ErrorCode::Parse, "state record needs a \"family\" field");
    const auto family = j.at("family").get<std::string>();
    StateOptions opt;
    opt.force = j.value("force", false);
    opt.tail_tolerance = j.value("tail_tolerance", opt.tail_tolerance);
    if (family == "fock") {
      return basis_state(basis, MultiIndex{j.at("occupations").get<std::vector<int>>()});
    }
    if (family == "glauber") return glauber_cs(complex_vector_from_json(j.at("alpha")), basis, opt);
    if (family == "cat") {
      return multimode_cat({complex_vector_from_json(j.at("alpha")), complex_from_json(j.at("c_plus")),
                            complex_from_json(j.at("c_minus"))},
                           basis, opt);
    }
    if (family == "even") return multimode_cat(even_cs(complex_vector_from_json(j.at("alpha"))), basis, opt);
    if (family == "odd") return multimode_cat(odd_cs(complex_vector_from_json(j.at("alpha"))), basis, opt);
    if (family == "phi_cat") {
      return phi_cat({complex_vector_from_json(j.at("alpha")), j.at("phi").get<double>(), sign_from_json(j)}, basis, opt);
    }
    if (family == "bg_su11") return bg_su11_cs({complex_from_json(j.at("z")), j.at("k").get<double>()}, basis, opt);
    if (family == "upq") {
      const int p = j.at("p").get<int>();
      const int q = j.at("q").get<int>();
      const int l = j.at("l").get<int>();
      UpqParams params;
      if (j.contains("z")) {
        const auto z = complex_vector_from_json(j.at("z"));
        params = upq_from_reduced(p, q, l, z, complex_from_json(j.at("alpha_n")));
      } else {
        params = {p, q, l, complex_vector_from_json(j.at("alpha"))};
      }
      auto s = upq_bg_cs(params, basis);
      if (s.empty) fail(ErrorCode::InvalidArgument, "sector l = " + std::to_string(l) + " is empty under the cutoff");
      return s.state;
    }
    if (family == "squared_cat") {
      SquaredCatParams params{complex_vector_from_json(j.at("alpha")),
                              complex_from_json(j.value("c_plus", nlohmann::json(1.0))),
                              complex_from_json(j.value("c_minus", nlohmann::json(0.0))),
                              complex_from_json(j.value("d_plus", nlohmann::json(1.0))),
                              complex_from_json(j.value("d_minus", nlohmann::json(0.0)))};
      if (j.value("normalize", false)) params = normalize_squared_cat(params, basis);
      return squared_amp_cat(params, basis, opt);
    }
    fail(ErrorCode::InvalidArgument, "unknown state family '" + family +
                                         "' (expected fock, glauber, cat, even, odd, phi_cat, bg_su11, upq, squared_cat)");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("state record: ") + e.what());
  }
}

}  // namespace fockforge
