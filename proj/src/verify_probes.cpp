#include <cmath>
#include <numbers>

#include "fockforge/error.hpp"
#include "fockforge/quadrature.hpp"
#include "fockforge/verify.hpp"

namespace fockforge {

namespace {

double nested_moment(const MeasureSpec& spec, const std::vector<int>& degree, std::vector<double>& radii,
                     std::size_t dim) {
  IntegrationOptions opt;
  opt.rel_tol = 1e-12;
  auto inner = [&](double R) {
    radii[dim] = std::sqrt(R);
    const double rest = dim + 1 == radii.size() ? measure_density(spec, radii) : nested_moment(spec, degree, radii, dim + 1);
    return rest == 0.0 ? 0.0 : rest * std::pow(R, degree[dim]);
  };
  return integrate_half_line(inner, 1.0 + degree[dim], opt).value;
}

double moment(const MeasureSpec& spec, const std::vector<int>& degree) {
  std::vector<double> radii(degree.size(), 0.0);
  try {
    return nested_moment(spec, degree, radii, 0);
  } catch (const Error& e) {
    fail(ErrorCode::Numeric, "moment of " + to_string(spec.kind) + " diverges or fails: " + e.what());
  }
}

}  // namespace

MomentProbe measure_uniqueness_probe(const MeasureSpec& a, const MeasureSpec& b,
                                     const std::vector<std::vector<int>>& degrees) {
  if (a.radial_dims() != b.radial_dims()) {
    fail(ErrorCode::InvalidArgument, "densities live on different radial domains");
  }
  MomentProbe out;
  out.degrees = degrees;
  double lo = INFINITY, hi = -INFINITY, mean = 0.0;
  for (const auto& d : degrees) {
    if (static_cast<int>(d.size()) != a.radial_dims()) fail(ErrorCode::InvalidArgument, "degree tuple has the wrong length");
    const double ma = moment(a, d);
    const double mb = moment(b, d);
    out.moments_a.push_back(ma);
    out.moments_b.push_back(mb);
    out.differences.push_back(ma - mb);
    const double ratio = ma / mb;
    out.ratios.push_back(ratio);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    mean += ratio;
  }
  if (!degrees.empty()) {
    mean /= double(degrees.size());
    out.ratio_spread = (hi - lo) / std::abs(mean);
  }
  return out;
}

double bg_moment(double k, int n) {
  MeasureSpec m;
  m.kind = MeasureKind::BGSu11;
  m.k = k;
  const double nu = 2.0 * k - 1.0;
  auto f = [&](double r) {
    const double rr[1] = {r};
    const double kernel = std::exp((2.0 * n + nu) * std::log(r) - ln_bessel_i(nu, 2.0 * r));
    return 2.0 * std::numbers::pi * r * measure_density(m, rr) * kernel;
  };
  IntegrationOptions opt;
  opt.rel_tol = 1e-13;
  return integrate_half_line(f, 1.0 + n, opt).value;
}

}  // namespace fockforge
