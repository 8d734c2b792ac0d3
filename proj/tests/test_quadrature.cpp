#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fockforge/error.hpp"
#include "fockforge/quadrature.hpp"
#include "fockforge/specfun.hpp"

using namespace fockforge;

TEST_CASE("Gauss-Laguerre moments") {
  for (double alpha : {0.0, 0.5, 2.0}) {
    for (int order : {4, 16, 64}) {
      const auto rule = gauss_laguerre(order, alpha);
      REQUIRE(rule.nodes.size() == static_cast<std::size_t>(order));
      for (int m = 0; m < std::min(2 * order, 40); ++m) {
        double sum = 0.0;
        for (std::size_t a = 0; a < rule.nodes.size(); ++a) sum += rule.weights[a] * std::pow(rule.nodes[a], m);
        const double exact = std::exp(ln_gamma(m + alpha + 1.0));
        CAPTURE(alpha);
        CAPTURE(order);
        CAPTURE(m);
        CHECK(std::abs(sum / exact - 1.0) < 1e-12);
      }
    }
  }
  const auto rule = gauss_laguerre(32);
  for (std::size_t a = 1; a < rule.nodes.size(); ++a) CHECK(rule.nodes[a] > rule.nodes[a - 1]);
}

TEST_CASE("half-line integration") {
  const auto r = integrate_half_line([](double x) { return std::exp(-x); });
  CHECK(std::abs(r.value - 1.0) < 1e-14);
  CHECK(r.evaluations > 0);
  const auto s = integrate_half_line([](double x) { return 1.0 / std::sqrt(x) * std::exp(-x); });
  CHECK(std::abs(s.value - std::sqrt(std::numbers::pi)) < 1e-13);
  const auto t = integrate_half_line([](double x) { return 1.0 / (1.0 + x * x); });
  CHECK(std::abs(t.value - std::numbers::pi / 2) < 1e-12);
  const auto g = integrate_half_line([](double x) { return std::exp(-(x - 30.0) * (x - 30.0)); }, 30.0);
  CHECK(std::abs(g.value - std::sqrt(std::numbers::pi)) < 1e-12);
  // K_0(2) = int_0^inf exp(-2 cosh t) dt
  const auto k = integrate_half_line([](double t) { return std::exp(-2.0 * std::cosh(t)); });
  CHECK(std::abs(k.value / bessel_k(0.0, 2.0) - 1.0) < 1e-13);
}

TEST_CASE("exp-sinh rule drops underflowing nodes") {
  const auto rule = exp_sinh_rule(1.0, 0.25);
  REQUIRE(!rule.nodes.empty());
  for (double w : rule.weights) CHECK(w > 0.0);
  for (double x : rule.nodes) CHECK(std::isfinite(x));
}

TEST_CASE("non-convergent integrals throw") {
  IntegrationOptions o;
  o.max_levels = 3;
  bool threw = false;
  try {
    integrate_half_line([](double x) { return std::sin(50.0 * x) / (1.0 + x); }, 1.0, o);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::Numeric;
  }
  CHECK(threw);
}
