#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "fockforge/algebra.hpp"
#include "fockforge/error.hpp"
#include "fockforge/states.hpp"
#include "fockforge/verify.hpp"

using namespace fockforge;
using G = GeneratorSpec;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

ResolutionOptions small_probe(const FockBasis& basis, int max_total) {
  ResolutionOptions o;
  o.radial_order = 48;
  o.angular_order = 24;
  for (std::size_t n = 0; n < basis.size(); ++n) {
    if (basis.at(n).total() <= max_total) o.probe.push_back(n);
  }
  return o;
}

MeasureSpec gaussian(int modes) { return {MeasureKind::GaussianGlauber, modes}; }

}  // namespace

TEST_CASE("eigen residuals and budgets") {
  const auto b = build_basis(2, 30);
  const std::vector<cplx> alpha{{0.8, 0.1}, {-0.4, 0.6}};
  const auto g = glauber_cs(alpha, b);
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      const cplx lam = alpha[i - 1] * alpha[j - 1];
      const double budget = shell_tail_budget(std::abs(lam), 1.0, squared_norm(alpha), 30, 2);
      CHECK(eigen_residual(G::e(i, j), g, lam) <= budget + 1e-15);
    }
  }
  CHECK(eigen_residual(G::e(1, 2), g, 0.0) > 0.1);
  const auto check = eigen_check(G::create(1), g, 0.0);
  CHECK(check.truncation_loss > 0.0);
  CHECK(shell_tail_budget(1.0, 1.0, 0.5, 2, 4) == doctest::Approx(1.0));
  CHECK(shell_tail_budget(1.0, 2.0, 1.0, 40, 2) < 1e-20);
}

TEST_CASE("factorization of z_ij") {
  const std::vector<cplx> alpha{{0.5, 0.2}, {-1.0, 0.3}, {0.0, 0.7}};
  Eigen::MatrixXcd z(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) z(i, j) = alpha[i] * alpha[j];
  const auto f = factorization_check(z);
  REQUIRE(f.factorizable);
  REQUIRE(f.alpha.size() == 3);
  const cplx sign = f.alpha[0] / alpha[0];
  CHECK(std::abs(std::abs(sign.real()) - 1.0) < 1e-14);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(f.alpha[i] - sign * alpha[i]) < 1e-14);
  z(0, 1) += 0.1;
  z(1, 0) += 0.1;
  const auto bad = factorization_check(z);
  CHECK_FALSE(bad.factorizable);
  CHECK(bad.worst_violation > 0.01);
  CHECK_FALSE(bad.certificate.empty());
  CHECK(factorization_check(Eigen::MatrixXcd::Zero(2, 2)).factorizable);
}

TEST_CASE("variance equality on coherent states") {
  const auto b = build_basis(2, 40);
  const auto g = glauber_cs(std::vector<cplx>{{0.6, 0.2}, {0.3, -0.5}}, b);
  const auto v = variance_equality_report(g, 1, 2);
  CHECK(std::abs(v.difference) <= v.budget + 1e-14);
  CHECK(v.var_x > 0.0);
  const auto vac = construct_state(nlohmann::json::parse(R"({"family":"fock","occupations":[0,0]})"), b);
  const auto top = construct_state(nlohmann::json::parse(R"({"family":"fock","occupations":[2,2]})"), b);
  const auto w = variance_equality_report(scaled(std::sqrt(0.5), added(vac, top)), 1, 2);
  CHECK(std::abs(w.difference) > 0.5);
}

TEST_CASE("differential and phi representations") {
  for (double k : {0.5, 1.0, 2.5}) CHECK(analytic_rep_check(k, 8).passed());
  for (int sign : {+1, -1}) {
    const auto r = phi_rep_check(0.7, sign, 6);
    CHECK(r.passed());
    bool has_probe = false;
    for (const auto& l : r.lines) has_probe |= l.kind == CheckKind::Probe;
    CHECK(has_probe);
  }
}

TEST_CASE("Glauber and phi-cat resolutions") {
  const auto b = build_basis(2, 8);
  const auto o = small_probe(*b, 4);
  const auto glauber = resolve_identity({FamilyKind::Glauber}, gaussian(2), b, o);
  CHECK(glauber.gram_deviation < 1e-12);
  CHECK(glauber.expected == "identity");
  CHECK(glauber.hermiticity < 1e-14);
  CHECK(glauber.min_eigenvalue > 0.99);
  FamilySpec phi{FamilyKind::PhiCat, 0.9, -1};
  CHECK(resolve_identity(phi, gaussian(2), b, o).gram_deviation < 1e-12);
  MeasureSpec wrong = gaussian(2);
  wrong.scale = 1.1;
  CHECK(resolve_identity({FamilyKind::Glauber}, wrong, b, o).gram_deviation > 0.05);
}

TEST_CASE("parity resolutions") {
  const auto b = build_basis(1, 16);
  const auto o = small_probe(*b, 10);
  const auto even = resolve_identity({FamilyKind::EvenProjection}, gaussian(1), b, o);
  CHECK(even.expected == "parity_even");
  CHECK(even.gram_deviation < 1e-12);
  const auto odd = resolve_identity({FamilyKind::OddProjection}, gaussian(1), b, o);
  CHECK(odd.gram_deviation < 1e-12);
  auto full = o;
  full.full_identity = true;
  const auto control = resolve_identity({FamilyKind::EvenProjection}, gaussian(1), b, full);
  CHECK(opposite_parity_deviation(control, *b, FamilyKind::EvenProjection) == doctest::Approx(1.0));
  // normalized even states under the Gaussian measure do not resolve the even projector
  const auto normalized = resolve_identity({FamilyKind::EvenNormalized}, gaussian(1), b, o);
  CHECK(normalized.gram_deviation > 0.5);
}

TEST_CASE("su(1,1) resolution") {
  const auto b = build_basis(1, 12);
  for (double k : {0.5, 1.0, 1.5}) {
    const MeasureSpec m{MeasureKind::BGSu11, 1, k};
    const auto r = resolve_identity({FamilyKind::BGSu11, 0.0, 1, k}, m, b, small_probe(*b, 8));
    CAPTURE(k);
    CHECK(r.gram_deviation < 1e-10);
  }
  CHECK(code_of([&] {
          resolve_identity({FamilyKind::BGSu11, 0.0, 1, 0.75}, {MeasureKind::BGSu11, 1, 0.75}, b, small_probe(*b, 4));
        }) == ErrorCode::InvalidArgument);
}

TEST_CASE("u(p,q) resolutions") {
  const auto b = build_basis(2, 8);
  const auto o = small_probe(*b, 4);
  for (int l : {-2, 0, 1}) {
    FamilySpec f{FamilyKind::UpqAlpha};
    f.l = l;
    const auto r = resolve_identity(f, {MeasureKind::UpqAlpha, 2}, b, o);
    CAPTURE(l);
    CHECK(r.expected == "sector l=" + std::to_string(l));
    CHECK(r.gram_deviation < 1e-10);
  }
  FamilySpec z{FamilyKind::UpqZ};
  z.l = -2;
  MeasureSpec m{MeasureKind::UpqZ, 2, 0.5, -2, 1, 1, true};
  CHECK(resolve_identity(z, m, b, o).gram_deviation < 1e-8);
  m.corrected_exponent = false;
  CHECK(resolve_identity(z, m, b, o).gram_deviation > 1.0);
}

TEST_CASE("resolution argument errors") {
  const auto b = build_basis(1, 20);
  ResolutionOptions o;
  o.angular_order = 8;
  o.probe = {0, 10};
  CHECK(code_of([&] { resolve_identity({FamilyKind::Glauber}, gaussian(1), b, o); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("sector checks") {
  const std::vector<cplx> alpha{{0.5, 0.1}, {0.4, -0.3}, {0.2, 0.6}};
  const auto b = build_basis(3, 14);
  CHECK(sector_structure_check(alpha, 2, 1, {-2, -1, 0, 1, 2}, b).passed());
  CHECK(sector_orthogonality_check(alpha, 2, 1, {-2, -1, 0, 1, 2}, b).passed());
  CHECK(glauber_reconstruction_check(alpha, 2, 1, -14, 14, b).passed());
  const auto dropped = glauber_reconstruction_check(alpha, 2, 1, -14, 14, b, 0);
  CHECK(dropped.passed());
  CHECK(dropped.lines.front().value > 1e-3);
}

TEST_CASE("moment probes") {
  for (double k : {0.5, 1.0}) {
    for (int n = 0; n <= 6; ++n) {
      const double exact = std::exp(ln_gamma(n + 1.0) + ln_gamma(2.0 * k + n));
      CHECK(std::abs(bg_moment(k, n) / exact - 1.0) < 1e-8);
    }
  }
  const MeasureSpec a{MeasureKind::UpqZ, 2, 0.5, -2, 1, 1, true};
  const MeasureSpec fk{MeasureKind::FujiiK, 2, 0.5, -2, 1, 1};
  const auto same = measure_uniqueness_probe(a, a, {{0}, {1}, {2}});
  CHECK(same.ratio_spread < 1e-12);
  for (double d : same.differences) CHECK(d == 0.0);
  const auto probe = measure_uniqueness_probe(a, fk, {{0}, {1}, {2}});
  REQUIRE(probe.ratios.size() == 3);
  for (double r : probe.ratios) CHECK(std::isfinite(r));
}
