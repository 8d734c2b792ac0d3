#include "fockforge/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "fockforge/error.hpp"

namespace fockforge {

Rule gauss_laguerre(int order, double alpha) {
  if (order < 1) fail(ErrorCode::InvalidArgument, "Gauss-Laguerre order must be positive");
  if (!(alpha > -1.0)) fail(ErrorCode::InvalidArgument, "Gauss-Laguerre exponent must exceed -1");
  const int n = order;
  const long double alf = alpha;
  std::vector<long double> x(static_cast<std::size_t>(n));
  Rule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const long double log_norm = std::lgamma(static_cast<long double>(alpha + n)) - std::lgamma(static_cast<long double>(n));
  long double z = 0.0L;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = (1.0L + alf) * (3.0L + 0.92L * alf) / (1.0L + 2.4L * n + 1.8L * alf);
    } else if (i == 1) {
      z += (15.0L + 6.25L * alf) / (1.0L + 0.9L * alf + 2.5L * n);
    } else {
      const long double ai = i - 1;
      z += ((1.0L + 2.55L * ai) / (1.9L * ai) + 1.26L * ai * alf / (1.0L + 3.5L * ai)) *
           (z - x[static_cast<std::size_t>(i - 2)]) / (1.0L + 0.3L * alf);
    }
    long double p1 = 0.0L, p2 = 0.0L, pp = 0.0L;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      p1 = 1.0L;
      p2 = 0.0L;
      for (int j = 0; j < n; ++j) {
        const long double p3 = p2;
        p2 = p1;
        p1 = ((2.0L * j + 1.0L + alf - z) * p2 - (j + alf) * p3) / (j + 1.0L);
      }
      pp = (n * p1 - (n + alf) * p2) / z;
      const long double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) <= 1e-17L * std::fabs(z)) {
        converged = true;
        break;
      }
    }
    if (!converged) fail(ErrorCode::Numeric, "Gauss-Laguerre root iteration did not converge");
    x[static_cast<std::size_t>(i)] = z;
    rule.nodes[static_cast<std::size_t>(i)] = static_cast<double>(z);
    rule.weights[static_cast<std::size_t>(i)] = static_cast<double>(-std::exp(log_norm) / (pp * n * p2));
  }
  return rule;
}

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
// pi/2 sinh(t) stays below 300 on [-kTMax, kTMax].
const double kTMax = std::asinh(300.0 / kHalfPi);

bool node(double scale, double t, double& x, double& w) {
  const double u = kHalfPi * std::sinh(t);
  x = scale * std::exp(u);
  w = x * kHalfPi * std::cosh(t);
  return std::isfinite(x) && x > 0.0 && std::isfinite(w) && w > 0.0;
}

}  // namespace

Rule exp_sinh_rule(double scale, double h) {
  if (!(scale > 0.0) || !(h > 0.0)) fail(ErrorCode::InvalidArgument, "exp-sinh rule needs positive scale and step");
  Rule rule;
  const int kmax = static_cast<int>(std::floor(kTMax / h));
  for (int k = -kmax; k <= kmax; ++k) {
    double x, w;
    if (node(scale, k * h, x, w)) {
      rule.nodes.push_back(x);
      rule.weights.push_back(w * h);
    }
  }
  return rule;
}

IntegrationResult integrate_half_line(const std::function<double(double)>& f, double scale,
                                      const IntegrationOptions& options) {
  if (!(scale > 0.0)) fail(ErrorCode::InvalidArgument, "integration scale must be positive");
  IntegrationResult result;
  double h = options.initial_step;
  auto eval = [&](double t) {
    double x, w;
    if (!node(scale, t, x, w)) return 0.0;
    const double v = f(x);
    ++result.evaluations;
    if (!std::isfinite(v)) fail(ErrorCode::Numeric, "integrand is not finite at x = " + std::to_string(x));
    return v * w;
  };
  double sum = eval(0.0);
  for (int k = 1; k * h <= kTMax; ++k) sum += eval(k * h) + eval(-k * h);
  double estimate = sum * h;
  for (int level = 1; level <= options.max_levels; ++level) {
    h /= 2.0;
    double added = 0.0;
    for (int k = 1; k * h <= kTMax; k += 2) added += eval(k * h) + eval(-k * h);
    sum += added;
    const double next = sum * h;
    result.error_estimate = std::abs(next - estimate);
    estimate = next;
    result.levels = level;
    if (level >= 3 && result.error_estimate <= std::max(options.abs_tol, options.rel_tol * std::abs(estimate))) {
      result.value = estimate;
      return result;
    }
  }
  fail(ErrorCode::Numeric, "double-exponential quadrature did not converge (last change " +
                               std::to_string(result.error_estimate) + ")");
}

}  // namespace fockforge
