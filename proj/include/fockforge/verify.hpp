#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fockforge/algebra.hpp"
#include "fockforge/fock.hpp"
#include "fockforge/report.hpp"
#include "fockforge/specfun.hpp"
#include "fockforge/states.hpp"

namespace fockforge {

// ---- eigenstates ---------------------------------------------------------

/// ||op psi - lambda psi|| on the basis.
double eigen_residual(const GeneratorSpec& op, const StateVector& state, cplx eigenvalue);

struct EigenCheck {
  double residual = 0.0;
  double truncation_loss = 0.0;  // weight op pushed above the cutoff
};
EigenCheck eigen_check(const GeneratorSpec& op, const StateVector& state, cplx eigenvalue);

/// Residual bound for a truncated eigenstate of an operator that removes
/// `degree` quanta: |lambda| * coefficient_sum * sqrt(P(n_tot > cutoff - degree))
/// for a Poisson distribution of the given mean.
double shell_tail_budget(double eigen_abs, double coefficient_sum, double mean, int cutoff, int degree);

struct Factorization {
  bool factorizable = false;
  std::vector<cplx> alpha;  // alpha_i alpha_j = z_ij when factorizable
  double worst_violation = 0.0;
  std::array<int, 4> worst_relation{};  // 1-based (i,j,k,l) of the worst z_ij z_kl mismatch
  std::string certificate;
  std::string gauge_note;
};

/// Checks z_ij z_kl = z_ik z_jl = z_il z_jk and recovers alpha.
/// alpha_r = principal sqrt(z_rr) at the first nonzero diagonal entry r.
Factorization factorization_check(const Eigen::MatrixXcd& z, double tolerance = 1e-10);

struct VarianceReport {
  double var_x = 0.0;
  double var_y = 0.0;
  double difference = 0.0;
  double budget = 0.0;
  cplx mean_e;
};

/// X = (E + E+)/2 and Y = i(E - E+)/2 for E = E(i,j). The budget bounds
/// |Re(<E^2> - <E>^2)| by ||(E+ - conj l) psi|| ||(E - l) psi|| / ||psi||^2
/// with l = <E>, counting the weight E+ pushes above the cutoff.
VarianceReport variance_equality_report(const StateVector& state, int i, int j);

/// Differential realization of the discrete series on polynomials
/// (z, 2k d/dz + z d^2/dz^2, k + z d/dz) transported to the ladder basis.
VerificationReport analytic_rep_check(double k, int max_degree);

/// One-mode phi-representation f(alpha) = e^{|alpha|^2/2} <phi, alpha*|psi>
/// checked on number states: a acts as P d/dalpha and a+ as P alpha, P the
/// phi -> -phi inversion. The swapped assignment is reported as a probe.
VerificationReport phi_rep_check(double phi, int sign, int max_degree);

// ---- resolution of unity -------------------------------------------------

enum class FamilyKind {
  Glauber,
  PhiCat,
  EvenProjection,  // (|a> + |-a>)/2
  OddProjection,   // (|a> - |-a>)/2
  EvenNormalized,  // normalized even coherent state, one mode
  OddNormalized,
  UpqAlpha,        // sector-l component over the full alpha
  UpqZ,            // sector-l component over reduced coordinates
  BGSu11,
};

struct FamilySpec {
  FamilyKind kind = FamilyKind::Glauber;
  double phi = 0.0;
  int sign = +1;
  double k = 0.5;
  int p = 1;
  int q = 1;
  int l = 0;
};

std::string to_string(FamilyKind kind);
FamilyKind parse_family_kind(const std::string& name);
nlohmann::json family_to_json(const FamilySpec& family);

struct ResolutionOptions {
  int radial_order = 64;    // Gauss-Laguerre order for Gaussian densities
  int angular_order = 64;   // trapezoid points per angle
  std::vector<std::size_t> probe;  // empty: every state with n_tot <= (angular_order - 2) / 2
  bool full_identity = false;      // compare against 1 instead of the family's projector
  double radial_tolerance = 1e-13; // step-halving target for double-exponential grids
  int max_levels = 7;
};

ResolutionReport resolve_identity(const FamilySpec& family, const MeasureSpec& measure, const BasisPtr& basis,
                                  const ResolutionOptions& options = {});

/// Largest |G_nn - 1| over probe states outside the family's support.
double opposite_parity_deviation(const ResolutionReport& report, const FockBasis& basis, FamilyKind family);

// ---- u(p,q) sectors -------------------------------------------------------

VerificationReport sector_orthogonality_check(std::span<const cplx> alpha, int p, int q, const std::vector<int>& ls,
                                              const BasisPtr& basis);

/// Sector support and L-eigenvalue exactness of the u(p,q) states.
VerificationReport sector_structure_check(std::span<const cplx> alpha, int p, int q, const std::vector<int>& ls,
                                          const BasisPtr& basis);

/// || e^{-|a|^2/2} sum_l ||a;l> - |a> || over l in [l_min, l_max] minus `drop`.
VerificationReport glauber_reconstruction_check(std::span<const cplx> alpha, int p, int q, int l_min, int l_max,
                                                const BasisPtr& basis, std::optional<int> drop = std::nullopt);

// ---- appendix probes ------------------------------------------------------

struct MomentProbe {
  std::vector<std::vector<int>> degrees;
  std::vector<double> moments_a;
  std::vector<double> moments_b;
  std::vector<double> differences;
  std::vector<double> ratios;  // a / b
  double ratio_spread = 0.0;   // (max - min) / |mean| of the ratios
};

/// int dR_1..dR_d [F_a - F_b] R_1^{n_1}..R_d^{n_d} with R_i = r_i^2, for both
/// densities over the same reduced radii.
MomentProbe measure_uniqueness_probe(const MeasureSpec& a, const MeasureSpec& b,
                                     const std::vector<std::vector<int>>& degrees);

/// int_0^inf 2 pi r dr rho_BG(r) r^{2n+2k-1} / I_{2k-1}(2r); equals n! Gamma(2k+n).
double bg_moment(double k, int n);

}  // namespace fockforge
