#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fockforge/fock.hpp"

namespace fockforge {

struct StateOptions {
  double tail_tolerance = 1e-10;
  bool force = false;  // build even if the tail bound is exceeded
};

struct BGParams {
  cplx z;
  double k = 0.5;
};

struct CatParams {
  std::vector<cplx> alpha;
  cplx c_plus{1.0, 0.0};
  cplx c_minus{0.0, 0.0};
};

struct PhiCatParams {
  std::vector<cplx> alpha;
  double phi = 0.0;
  int sign = +1;
};

struct UpqParams {
  int p = 1;
  int q = 1;
  int l = 0;
  std::vector<cplx> alpha;  // length p + q
};

/// Base cats over alpha and i*alpha share (c_plus, c_minus).
struct SquaredCatParams {
  std::vector<cplx> alpha;
  cplx c_plus{1.0, 0.0};
  cplx c_minus{0.0, 0.0};
  cplx d_plus{1.0, 0.0};
  cplx d_minus{0.0, 0.0};
};

/// Smallest cutoff whose Glauber tail is at most `tolerance`.
int required_cutoff(std::span<const cplx> alpha, double tolerance);

StateVector glauber_cs(std::span<const cplx> alpha, const BasisPtr& basis, const StateOptions& options = {});

/// |C+|^2 + |C-|^2 + 2 Re(C- conj(C+)) e^{-2|alpha|^2} - 1.
double cat_norm_defect(const CatParams& params);
CatParams even_cs(std::vector<cplx> alpha);
CatParams odd_cs(std::vector<cplx> alpha);
CatParams cat_of(const PhiCatParams& params);

StateVector multimode_cat(const CatParams& params, const BasisPtr& basis, const StateOptions& options = {});
StateVector phi_cat(const PhiCatParams& params, const BasisPtr& basis, const StateOptions& options = {});
/// Term-by-term expansion with the factor e^{+-i (-1)^{n_tot} phi}.
StateVector phi_cat_expansion(const PhiCatParams& params, const BasisPtr& basis);

/// Abstract discrete-series ladder: ordinal n of a one-mode basis stands for
/// |n + k, k>. Amplitudes z^{k-1/2+n} / sqrt(n! Gamma(2k+n) I_{2k-1}(2|z|))
/// with principal-branch powers (arg in (-pi, pi], arg 0 = 0).
StateVector bg_su11_cs(const BGParams& params, const BasisPtr& basis, const StateOptions& options = {});
/// Weight of bg_su11_cs beyond the basis cutoff.
double bg_su11_tail(const BGParams& params, int cutoff);
/// <z1;k|z2;k> in closed form.
cplx bg_overlap_closed_form(cplx z1, cplx z2, double k);

struct UpqState {
  StateVector state;
  double norm2 = 0.0;
  bool empty = false;        // sector l holds no basis state under the cutoff
  double tail_budget = 0.0;  // bound on the sector weight beyond the cutoff
};

/// Unnormalized sector-l component sum prod alpha_i^{n_i}/sqrt(n_i!) |n>.
UpqState upq_bg_cs(const UpqParams& params, const BasisPtr& basis);
/// Full alpha from the reduced coordinates z (length N-1) and alpha_N:
/// alpha_b = z_b / alpha_N for b <= p, alpha_m = z_m alpha_N for p < m < N.
UpqParams upq_from_reduced(int p, int q, int l, std::span<const cplx> z, cplx alpha_n);

StateVector squared_amp_cat(const SquaredCatParams& params, const BasisPtr& basis, const StateOptions& options = {});
/// |D+|^2 + |D-|^2 + 2 Re(D- conj(D+) <base(alpha)|base(i alpha)>) - 1 with the
/// overlap taken on the basis.
double squared_cat_norm_defect(const SquaredCatParams& params, const BasisPtr& basis);
/// Rescales (d_plus, d_minus) so the defect vanishes.
SquaredCatParams normalize_squared_cat(SquaredCatParams params, const BasisPtr& basis);

/// Builds a state from a family record, e.g.
/// {"family":"phi_cat","alpha":[[0.7,0],[0.6,0]],"phi":0.4,"sign":"+"}.
StateVector construct_state(const nlohmann::json& family, const BasisPtr& basis);

std::vector<cplx> complex_vector_from_json(const nlohmann::json& j);
nlohmann::json complex_vector_to_json(std::span<const cplx> v);
cplx complex_from_json(const nlohmann::json& j);

}  // namespace fockforge
