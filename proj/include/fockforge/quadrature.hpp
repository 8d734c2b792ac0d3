#pragma once

#include <functional>
#include <vector>

namespace fockforge {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Generalized Gauss-Laguerre rule: sum w_a f(x_a) ~ int_0^inf x^alpha e^{-x} f(x) dx.
Rule gauss_laguerre(int order, double alpha = 0.0);

/// Double-exponential (exp-sinh) rule on [0, inf) at step h,
/// x = scale * exp(pi/2 sinh t). Nodes whose weight underflows are dropped.
Rule exp_sinh_rule(double scale, double h);

struct IntegrationOptions {
  double rel_tol = 1e-14;
  double abs_tol = 0.0;
  int max_levels = 10;
  double initial_step = 0.5;
};

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int levels = 0;
  std::size_t evaluations = 0;
};

/// int_0^inf f(x) dx by exp-sinh with step halving. `scale` should sit near
/// the bulk of the integrand. Throws Numeric if the levels run out.
IntegrationResult integrate_half_line(const std::function<double(double)>& f, double scale = 1.0,
                                      const IntegrationOptions& options = {});

}  // namespace fockforge
