#pragma once

#include <complex>
#include <span>
#include <string>

#include <json.hpp>

namespace fockforge {

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// S_nu(y) = sum_n y^n / (n! Gamma(n + nu + 1)), so that
/// I_nu(x) = (x/2)^nu S_nu(x^2/4). Entire in y.
double ln_reduced_bessel_i(double nu, double y);
std::complex<double> reduced_bessel_i(double nu, std::complex<double> y);

double ln_bessel_i(double nu, double x);
/// Throws Numeric on overflow instead of returning inf.
double bessel_i(double nu, double x);
/// e^{-x} I_nu(x).
double bessel_i_scaled(double nu, double x);

double ln_bessel_k(double nu, double x);
double bessel_k(double nu, double x);
/// e^{x} K_nu(x).
double bessel_k_scaled(double nu, double x);

enum class MeasureKind { GaussianGlauber, BGSu11, UpqAlpha, UpqZ, FujiiK };

/// Radial density of a resolution-of-unity measure, d mu = density * d^2(...).
///   GaussianGlauber, UpqAlpha: e^{-|alpha|^2} / pi^N over N mode radii
///   BGSu11:  (2/pi) K_{2k-1}(2r) I_{2k-1}(2r) over one radius
///   UpqZ:    F(P, Q) / pi^N over the N-1 reduced radii, P and Q the squared
///            radii of the first p and of the remaining q-1 coordinates,
///            F = pi int_0^inf t^e exp(-P/t - (Q+1) t) dt with e = q-p-l, or
///            e = q-1-p-l when corrected_exponent is set
///   FujiiK:  2 r^{-l-p} K_{-l-p}(2r) / pi^N over the N-1 reduced radii (q = 1)
/// `scale` multiplies every density.
struct MeasureSpec {
  MeasureKind kind = MeasureKind::GaussianGlauber;
  int modes = 1;
  double k = 0.5;
  int l = 0;
  int p = 1;
  int q = 1;
  bool corrected_exponent = false;
  double scale = 1.0;

  /// Number of radial coordinates the density takes.
  int radial_dims() const;
};

std::string to_string(MeasureKind kind);
MeasureKind parse_measure_kind(const std::string& name);
nlohmann::json measure_to_json(const MeasureSpec& spec);

double measure_density(const MeasureSpec& spec, std::span<const double> radii);

/// Exponent of |alpha_N|^2 inside F.
int upq_f_exponent(int l, int p, int q, bool corrected);
/// F by quadrature over t = |alpha_N|^2.
double upq_f(double P, double Q, int exponent);
/// 2 pi (P/(Q+1))^{s/2} K_s(2 sqrt(P (Q+1))), s = exponent + 1, for P > 0.
double upq_f_closed_form(double P, double Q, int exponent);

struct KnuProbe {
  int nu = 0;
  double z = 0.0;
  double lhs = 0.0;        // K_nu(2z)
  double rhs = 0.0;        // 2 pi (2z)^{-nu} int_0^inf x^{1+nu} e^{-x - z^2/x} dx
  double ratio = 0.0;      // rhs / lhs
  double classical = 0.0;  // (1/2) z^{-nu} int_0^inf x^{nu-1} e^{-x - z^2/x} dx
  double classical_rel_error = 0.0;
};

KnuProbe knu_integral_probe(int nu, double z);

}  // namespace fockforge
