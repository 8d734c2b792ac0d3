#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace fockforge {

using cplx = std::complex<double>;

/// Occupation numbers (n_1, ..., n_N) of an N-mode number state.
struct MultiIndex {
  std::vector<int> occ;

  int modes() const { return static_cast<int>(occ.size()); }
  int total() const;
  int operator[](int mode) const { return occ[static_cast<std::size_t>(mode)]; }

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;
};

std::string to_string(const MultiIndex& n);

struct BasisOptions {
  std::size_t max_size = 1'000'000;
};

/// binomial(cutoff + modes, modes), saturating at SIZE_MAX.
std::size_t basis_size(int modes, int cutoff);

/// All N-mode number states with total quanta <= cutoff, ordered by total
/// degree and, within a degree, lexicographically descending in the first
/// mode: (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) ...
class FockBasis {
 public:
  FockBasis(int modes, int cutoff, BasisOptions options = {});

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  std::size_t size() const { return states_.size(); }

  const MultiIndex& at(std::size_t ordinal) const { return states_.at(ordinal); }
  std::optional<std::size_t> find(const MultiIndex& n) const;
  std::size_t index_of(const MultiIndex& n) const;

  /// First ordinal of the shell with the given total.
  std::size_t shell_begin(int total) const;

  bool same_shape(const FockBasis& other) const {
    return modes_ == other.modes_ && cutoff_ == other.cutoff_;
  }

 private:
  struct Hash {
    std::size_t operator()(const std::vector<int>& v) const noexcept;
  };

  int modes_;
  int cutoff_;
  std::vector<MultiIndex> states_;
  std::vector<std::size_t> shell_offsets_;
  std::unordered_map<std::vector<int>, std::size_t, Hash> lookup_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

BasisPtr build_basis(int modes, int cutoff, BasisOptions options = {});

/// Sparse amplitudes over a FockBasis. Exact zeros are never stored.
/// truncation_loss() accumulates the squared weight that generator
/// applications pushed above the cutoff and dropped.
class StateVector {
 public:
  using Amplitudes = std::map<std::size_t, cplx>;

  explicit StateVector(BasisPtr basis) : basis_(std::move(basis)) {}
  StateVector(BasisPtr basis, Amplitudes amplitudes, double truncation_loss = 0.0);

  const BasisPtr& basis() const { return basis_; }
  const Amplitudes& amplitudes() const { return amps_; }
  cplx amplitude(std::size_t ordinal) const;
  cplx amplitude(const MultiIndex& n) const;
  double truncation_loss() const { return loss_; }
  bool empty() const { return amps_.empty(); }
  double norm2() const;

  /// Dense copy in basis order.
  std::vector<cplx> dense() const;

 private:
  BasisPtr basis_;
  Amplitudes amps_;
  double loss_ = 0.0;
};

StateVector basis_state(const BasisPtr& basis, const MultiIndex& n);
StateVector scaled(cplx factor, const StateVector& v);
StateVector added(const StateVector& u, const StateVector& v);
/// u - v, used for residuals.
StateVector subtracted(const StateVector& u, const StateVector& v);

/// sum conj(u_n) v_n. Throws BasisMismatch if the bases differ in shape.
cplx inner_product(const StateVector& u, const StateVector& v);
double norm(const StateVector& v);

enum class Parity { Even, Odd };

struct SectorLabel {
  Parity parity;
  int l;
  int p;
  int q;
};

Parity parity_of(const MultiIndex& n);
SectorLabel sector_of(const MultiIndex& n, int p, int q);

/// sum_{m > cutoff} e^{-mean} mean^m / m!, summed directly so small tails
/// keep full relative precision.
double poisson_tail(double mean, int cutoff);

/// Weight of the exact multimode Glauber state outside n_tot <= cutoff.
double coherent_tail_bound(std::span<const cplx> alpha, int cutoff);

double squared_norm(std::span<const cplx> alpha);

nlohmann::json basis_to_json(const FockBasis& basis);
nlohmann::json state_to_json(const StateVector& v);
StateVector state_from_json(const nlohmann::json& j, BasisOptions options = {});

}  // namespace fockforge
