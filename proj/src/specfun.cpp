#include "fockforge/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fockforge/error.hpp"
#include "fockforge/quadrature.hpp"

namespace fockforge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogMax = 709.78;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, std::string(what) + " must be finite");
}

double checked_exp(double log_value, const char* what) {
  if (log_value > kLogMax) fail(ErrorCode::Numeric, std::string(what) + " overflows double precision");
  return std::exp(log_value);
}

}  // namespace

double ln_gamma(double x) {
  require_finite(x, "ln_gamma argument");
  if (!(x > 0.0)) fail(ErrorCode::InvalidArgument, "ln_gamma needs x > 0");
  return std::lgamma(x);
}

namespace {

// e^x / sqrt(2 pi x) sum_k (-1)^k prod_{j<=k} (4 nu^2 - (2j-1)^2) / (k! (8x)^k)
double ln_bessel_i_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = -term * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return x - 0.5 * std::log(2.0 * kPi * x) + std::log(sum);
}

}  // namespace

double ln_reduced_bessel_i(double nu, double y) {
  require_finite(nu, "Bessel order");
  require_finite(y, "Bessel argument");
  if (nu < 0.0) fail(ErrorCode::InvalidArgument, "Bessel order must be non-negative");
  if (y < 0.0) fail(ErrorCode::InvalidArgument, "reduced Bessel series needs a non-negative argument");
  const double x = 2.0 * std::sqrt(y);
  if (x > 40.0 + nu * nu) return ln_bessel_i_asymptotic(nu, x) - nu * std::log(x / 2.0);
  // Terms relative to the first; rescaled whenever they grow large.
  double offset = -ln_gamma(nu + 1.0);
  double term = 1.0;
  double sum = 1.0;
  for (int m = 0; m < 100000; ++m) {
    term *= y / ((m + 1.0) * (m + nu + 1.0));
    sum += term;
    if (sum > 1e200) {
      offset += std::log(sum);
      term /= sum;
      sum = 1.0;
    }
    if (term <= 1e-18 * sum && (m + 1.0) * (m + nu + 1.0) > y) return offset + std::log(sum);
  }
  fail(ErrorCode::Numeric, "reduced Bessel series did not terminate");
}

std::complex<double> reduced_bessel_i(double nu, std::complex<double> y) {
  require_finite(nu, "Bessel order");
  if (nu < 0.0) fail(ErrorCode::InvalidArgument, "Bessel order must be non-negative");
  if (!std::isfinite(y.real()) || !std::isfinite(y.imag())) fail(ErrorCode::InvalidArgument, "argument must be finite");
  const double r = std::abs(y);
  const double head = std::exp(-ln_gamma(nu + 1.0));
  std::complex<double> term = head;
  std::complex<double> sum = term;
  double largest = head;
  for (int m = 0; m < 100000; ++m) {
    term *= y / ((m + 1.0) * (m + nu + 1.0));
    sum += term;
    largest = std::max(largest, std::abs(term));
    if (!std::isfinite(largest)) fail(ErrorCode::Numeric, "reduced Bessel series overflows");
    if (std::abs(term) <= 1e-18 * largest && (m + 1.0) * (m + nu + 1.0) > r) return sum;
  }
  fail(ErrorCode::Numeric, "reduced Bessel series did not terminate");
}

double ln_bessel_i(double nu, double x) {
  require_finite(x, "Bessel argument");
  if (x < 0.0) fail(ErrorCode::InvalidArgument, "bessel_i needs x >= 0");
  if (x == 0.0) {
    if (nu < 0.0) fail(ErrorCode::InvalidArgument, "Bessel order must be non-negative");
    return nu == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  if (x > 40.0 + nu * nu) return ln_bessel_i_asymptotic(nu, x);
  return nu * std::log(x / 2.0) + ln_reduced_bessel_i(nu, x * x / 4.0);
}

double bessel_i(double nu, double x) { return checked_exp(ln_bessel_i(nu, x), "bessel_i"); }

double bessel_i_scaled(double nu, double x) { return std::exp(ln_bessel_i(nu, x) - x); }

namespace {

// ln of int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt.
double ln_scaled_k_integral(double nu, double x) {
  const double a = std::abs(nu);
  const double peak = std::asinh(a / x);
  auto g = [&](double t) {
    const double sh = std::sinh(0.5 * t);
    return -2.0 * x * sh * sh + a * t;
  };
  const double gmax = g(peak);
  // Peak width from the curvature x cosh(peak); the window spans about 60 e-folds.
  const double width = std::min(1.0, 1.0 / std::sqrt(x * std::cosh(peak)));
  double upper = peak + width;
  while (g(upper) - gmax > -60.0) upper = peak + 2.0 * (upper - peak);
  double lower = std::max(0.0, peak - (upper - peak));
  while (lower > 0.0 && g(lower) - gmax > -60.0) lower = std::max(0.0, peak - 2.0 * (peak - lower));
  auto f = [&](double t) { return 0.5 * std::exp(g(t) - gmax) * (1.0 + std::exp(-2.0 * a * t)); };
  double previous = 0.0;
  for (int n = 32; n <= (1 << 22); n *= 2) {
    const double h = (upper - lower) / n;
    double s = 0.5 * f(lower) + 0.5 * f(upper);
    for (int j = 1; j < n; ++j) s += f(lower + j * h);
    s *= h;
    const double change = std::abs(s - previous);
    if (n > 32 && (change <= 1e-15 * s || (n >= 256 && change <= 2e-14 * s))) return gmax + std::log(s);
    previous = s;
  }
  fail(ErrorCode::Numeric, "bessel_k integral did not converge");
}

}  // namespace

double ln_bessel_k(double nu, double x) {
  require_finite(nu, "Bessel order");
  require_finite(x, "Bessel argument");
  if (!(x > 0.0)) fail(ErrorCode::InvalidArgument, "bessel_k needs x > 0");
  return ln_scaled_k_integral(nu, x) - x;
}

double bessel_k(double nu, double x) { return checked_exp(ln_bessel_k(nu, x), "bessel_k"); }

double bessel_k_scaled(double nu, double x) {
  require_finite(nu, "Bessel order");
  require_finite(x, "Bessel argument");
  if (!(x > 0.0)) fail(ErrorCode::InvalidArgument, "bessel_k needs x > 0");
  return checked_exp(ln_scaled_k_integral(nu, x), "bessel_k_scaled");
}

int MeasureSpec::radial_dims() const {
  switch (kind) {
    case MeasureKind::GaussianGlauber:
    case MeasureKind::UpqAlpha:
      return modes;
    case MeasureKind::BGSu11:
      return 1;
    case MeasureKind::UpqZ:
    case MeasureKind::FujiiK:
      return p + q - 1;
  }
  return 0;
}

std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::GaussianGlauber: return "gaussian";
    case MeasureKind::BGSu11: return "bg_su11";
    case MeasureKind::UpqAlpha: return "upq_alpha";
    case MeasureKind::UpqZ: return "upq_z";
    case MeasureKind::FujiiK: return "fujii_k";
  }
  return "?";
}

MeasureKind parse_measure_kind(const std::string& name) {
  for (auto k : {MeasureKind::GaussianGlauber, MeasureKind::BGSu11, MeasureKind::UpqAlpha, MeasureKind::UpqZ,
                 MeasureKind::FujiiK}) {
    if (to_string(k) == name) return k;
  }
  fail(ErrorCode::InvalidArgument,
       "unknown measure '" + name + "' (expected gaussian, bg_su11, upq_alpha, upq_z or fujii_k)");
}

nlohmann::json measure_to_json(const MeasureSpec& s) {
  nlohmann::json j{{"kind", to_string(s.kind)}};
  switch (s.kind) {
    case MeasureKind::GaussianGlauber:
    case MeasureKind::UpqAlpha:
      j["modes"] = s.modes;
      break;
    case MeasureKind::BGSu11:
      j["k"] = s.k;
      break;
    case MeasureKind::UpqZ:
      j["l"] = s.l;
      j["p"] = s.p;
      j["q"] = s.q;
      j["corrected_exponent"] = s.corrected_exponent;
      break;
    case MeasureKind::FujiiK:
      j["l"] = s.l;
      j["p"] = s.p;
      break;
  }
  if (s.scale != 1.0) j["scale"] = s.scale;
  return j;
}

int upq_f_exponent(int l, int p, int q, bool corrected) { return q - p - l - (corrected ? 1 : 0); }

double upq_f(double P, double Q, int exponent) {
  if (P < 0.0 || Q < 0.0) fail(ErrorCode::InvalidArgument, "F needs non-negative squared radii");
  const double b = Q + 1.0;
  if (P == 0.0) {
    if (exponent <= -1) fail(ErrorCode::Numeric, "F diverges at the origin for this exponent");
    return kPi * std::exp(ln_gamma(exponent + 1.0) - (exponent + 1.0) * std::log(b));
  }
  const double e = exponent;
  // Maximum of e ln t - P/t - b t.
  const double peak = (e + std::sqrt(e * e + 4.0 * b * P)) / (2.0 * b);
  const double scale = peak > 0.0 ? peak : P / (std::abs(e) + 1.0);
  const double gmax = e * std::log(scale) - P / scale - b * scale;
  auto f = [&](double t) { return std::exp(e * std::log(t) - P / t - b * t - gmax); };
  IntegrationOptions opt;
  opt.rel_tol = 1e-13;
  const auto r = integrate_half_line(f, scale, opt);
  return checked_exp(std::log(kPi * r.value) + gmax, "F");
}

double upq_f_closed_form(double P, double Q, int exponent) {
  if (!(P > 0.0) || Q < 0.0) fail(ErrorCode::InvalidArgument, "closed-form F needs P > 0 and Q >= 0");
  const double b = Q + 1.0;
  const double s = exponent + 1.0;
  const double ln = std::log(2.0 * kPi) + 0.5 * s * std::log(P / b) + ln_bessel_k(s, 2.0 * std::sqrt(P * b));
  return checked_exp(ln, "closed-form F");
}

double measure_density(const MeasureSpec& s, std::span<const double> radii) {
  if (static_cast<int>(radii.size()) != s.radial_dims()) {
    fail(ErrorCode::InvalidArgument, "measure " + to_string(s.kind) + " takes " + std::to_string(s.radial_dims()) +
                                         " radii, got " + std::to_string(radii.size()));
  }
  for (double r : radii) {
    if (!(r >= 0.0) || !std::isfinite(r)) fail(ErrorCode::InvalidArgument, "radii must be finite and non-negative");
  }
  switch (s.kind) {
    case MeasureKind::GaussianGlauber:
    case MeasureKind::UpqAlpha: {
      double r2 = 0.0;
      for (double r : radii) r2 += r * r;
      return s.scale * std::exp(-r2 - s.modes * std::log(kPi));
    }
    case MeasureKind::BGSu11: {
      const double nu = 2.0 * s.k - 1.0;
      if (!(s.k > 0.0) || nu != std::floor(nu)) fail(ErrorCode::InvalidArgument, "Bargmann index must be a positive half-integer");
      const double x = 2.0 * radii[0];
      if (x == 0.0) fail(ErrorCode::InvalidArgument, "BG density is singular at the origin");
      return s.scale * (2.0 / kPi) * bessel_k_scaled(nu, x) * bessel_i_scaled(nu, x);
    }
    case MeasureKind::UpqZ: {
      if (s.p < 1 || s.q < 1) fail(ErrorCode::InvalidArgument, "UpqZ needs p, q >= 1");
      double P = 0.0, Q = 0.0;
      for (std::size_t i = 0; i < radii.size(); ++i) (static_cast<int>(i) < s.p ? P : Q) += radii[i] * radii[i];
      const int n = s.p + s.q;
      const int e = upq_f_exponent(s.l, s.p, s.q, s.corrected_exponent);
      // Far from the origin the t-integrand is a narrow peak; the Bessel form is exact there.
      const double f = P * (Q + 1.0) > 1.0 ? upq_f_closed_form(P, Q, e) : upq_f(P, Q, e);
      return s.scale * f / std::pow(kPi, n);
    }
    case MeasureKind::FujiiK: {
      if (s.q != 1 || s.p < 1) fail(ErrorCode::InvalidArgument, "FujiiK needs q = 1 and p >= 1");
      double r2 = 0.0;
      for (double r : radii) r2 += r * r;
      const double r = std::sqrt(r2);
      if (r == 0.0) fail(ErrorCode::InvalidArgument, "FujiiK density is singular at the origin");
      const double nu = -s.l - s.p;
      const int n = s.p + s.q;
      return s.scale * checked_exp(std::log(2.0) + nu * std::log(r) + ln_bessel_k(nu, 2.0 * r) - n * std::log(kPi),
                                   "FujiiK density");
    }
  }
  return 0.0;
}

KnuProbe knu_integral_probe(int nu, double z) {
  if (nu < 0) fail(ErrorCode::InvalidArgument, "probe order must be a non-negative integer");
  if (!(z > 0.0)) fail(ErrorCode::InvalidArgument, "probe needs z > 0");
  KnuProbe out;
  out.nu = nu;
  out.z = z;
  out.lhs = bessel_k(nu, 2.0 * z);
  // int_0^inf x^{a} e^{-x - z^2/x} dx, integrand scaled by its peak.
  auto mellin = [&](double a) {
    const double peak = (a + std::sqrt(a * a + 4.0 * z * z)) / 2.0;
    const double scale = peak > 0.0 ? peak : z;
    const double gmax = a * std::log(scale) - scale - z * z / scale;
    IntegrationOptions opt;
    opt.rel_tol = 1e-13;
    const auto r = integrate_half_line([&](double x) { return std::exp(a * std::log(x) - x - z * z / x - gmax); },
                                       scale, opt);
    return std::log(r.value) + gmax;
  };
  out.rhs = std::exp(std::log(2.0 * kPi) - nu * std::log(2.0 * z) + mellin(1.0 + nu));
  out.ratio = out.rhs / out.lhs;
  out.classical = std::exp(std::log(0.5) - nu * std::log(z) + mellin(nu - 1.0));
  out.classical_rel_error = std::abs(out.classical - out.lhs) / out.lhs;
  return out;
}

}  // namespace fockforge
