#include "fockforge/fock.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fockforge/error.hpp"

namespace fockforge {

int MultiIndex::total() const {
  int t = 0;
  for (int n : occ) t += n;
  return t;
}

std::string to_string(const MultiIndex& n) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < n.occ.size(); ++i) os << (i ? "," : "") << n.occ[i];
  os << ')';
  return os.str();
}

std::size_t basis_size(int modes, int cutoff) {
  if (modes < 0 || cutoff < 0) return 0;
  // binomial(cutoff + modes, modes) built incrementally; every partial
  // product is itself a binomial coefficient so the division is exact.
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t result = 1;
  for (int i = 1; i <= modes; ++i) {
    const auto num = static_cast<std::size_t>(cutoff + i);
    if (result > kMax / num) return kMax;
    result = result * num / static_cast<std::size_t>(i);
  }
  return result;
}

std::size_t FockBasis::Hash::operator()(const std::vector<int>& v) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (int x : v) {
    h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

namespace {

void enumerate_shell(int modes, int remaining, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  if (static_cast<int>(prefix.size()) == modes - 1) {
    prefix.push_back(remaining);
    out.push_back(MultiIndex{prefix});
    prefix.pop_back();
    return;
  }
  for (int n = remaining; n >= 0; --n) {
    prefix.push_back(n);
    enumerate_shell(modes, remaining - n, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

FockBasis::FockBasis(int modes, int cutoff, BasisOptions options) : modes_(modes), cutoff_(cutoff) {
  if (modes < 1) fail(ErrorCode::InvalidArgument, "basis needs at least one mode");
  if (cutoff < 0) fail(ErrorCode::InvalidArgument, "cutoff must be non-negative");
  const std::size_t n = basis_size(modes, cutoff);
  if (n > options.max_size) {
    fail(ErrorCode::MemoryGuard, "basis of " + std::to_string(modes) + " modes with cutoff " +
                                     std::to_string(cutoff) + " has " + std::to_string(n) +
                                     " states, above the memory guard of " +
                                     std::to_string(options.max_size));
  }
  states_.reserve(n);
  shell_offsets_.reserve(static_cast<std::size_t>(cutoff) + 2);
  std::vector<int> prefix;
  for (int d = 0; d <= cutoff; ++d) {
    shell_offsets_.push_back(states_.size());
    enumerate_shell(modes, d, prefix, states_);
  }
  shell_offsets_.push_back(states_.size());
  lookup_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) lookup_.emplace(states_[i].occ, i);
}

std::optional<std::size_t> FockBasis::find(const MultiIndex& n) const {
  if (n.modes() != modes_) return std::nullopt;
  auto it = lookup_.find(n.occ);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t FockBasis::index_of(const MultiIndex& n) const {
  auto idx = find(n);
  if (!idx) fail(ErrorCode::InvalidArgument, "number state " + to_string(n) + " is not in the basis");
  return *idx;
}

std::size_t FockBasis::shell_begin(int total) const {
  if (total < 0) return 0;
  if (total > cutoff_) return states_.size();
  return shell_offsets_[static_cast<std::size_t>(total)];
}

BasisPtr build_basis(int modes, int cutoff, BasisOptions options) {
  return std::make_shared<const FockBasis>(modes, cutoff, options);
}

StateVector::StateVector(BasisPtr basis, Amplitudes amplitudes, double truncation_loss)
    : basis_(std::move(basis)), amps_(std::move(amplitudes)), loss_(truncation_loss) {
  if (!basis_) fail(ErrorCode::InvalidArgument, "state needs a basis");
  for (auto it = amps_.begin(); it != amps_.end();) {
    if (it->first >= basis_->size()) fail(ErrorCode::InvalidArgument, "amplitude ordinal outside the basis");
    if (!std::isfinite(it->second.real()) || !std::isfinite(it->second.imag())) {
      fail(ErrorCode::Numeric, "non-finite amplitude");
    }
    if (it->second == cplx{}) {
      it = amps_.erase(it);
    } else {
      ++it;
    }
  }
}

cplx StateVector::amplitude(std::size_t ordinal) const {
  auto it = amps_.find(ordinal);
  return it == amps_.end() ? cplx{} : it->second;
}

cplx StateVector::amplitude(const MultiIndex& n) const {
  auto idx = basis_->find(n);
  return idx ? amplitude(*idx) : cplx{};
}

double StateVector::norm2() const {
  double s = 0.0;
  for (const auto& [_, a] : amps_) s += std::norm(a);
  return s;
}

std::vector<cplx> StateVector::dense() const {
  std::vector<cplx> out(basis_->size());
  for (const auto& [i, a] : amps_) out[i] = a;
  return out;
}

StateVector basis_state(const BasisPtr& basis, const MultiIndex& n) {
  return StateVector(basis, {{basis->index_of(n), cplx{1.0, 0.0}}});
}

StateVector scaled(cplx factor, const StateVector& v) {
  StateVector::Amplitudes out;
  for (const auto& [i, a] : v.amplitudes()) out.emplace(i, factor * a);
  return StateVector(v.basis(), std::move(out), v.truncation_loss());
}

namespace {

void require_same_basis(const StateVector& u, const StateVector& v) {
  if (!u.basis()->same_shape(*v.basis())) {
    fail(ErrorCode::BasisMismatch, "states live on different bases");
  }
}

}  // namespace

StateVector added(const StateVector& u, const StateVector& v) {
  require_same_basis(u, v);
  StateVector::Amplitudes out = u.amplitudes();
  for (const auto& [i, a] : v.amplitudes()) out[i] += a;
  return StateVector(u.basis(), std::move(out), u.truncation_loss() + v.truncation_loss());
}

StateVector subtracted(const StateVector& u, const StateVector& v) {
  require_same_basis(u, v);
  StateVector::Amplitudes out = u.amplitudes();
  for (const auto& [i, a] : v.amplitudes()) out[i] -= a;
  return StateVector(u.basis(), std::move(out), u.truncation_loss() + v.truncation_loss());
}

cplx inner_product(const StateVector& u, const StateVector& v) {
  require_same_basis(u, v);
  cplx s{};
  const auto& small = u.amplitudes().size() <= v.amplitudes().size() ? u.amplitudes() : v.amplitudes();
  const bool u_small = &small == &u.amplitudes();
  for (const auto& [i, a] : small) {
    const cplx b = u_small ? v.amplitude(i) : u.amplitude(i);
    s += u_small ? std::conj(a) * b : std::conj(b) * a;
  }
  return s;
}

double norm(const StateVector& v) { return std::sqrt(v.norm2()); }

Parity parity_of(const MultiIndex& n) { return n.total() % 2 == 0 ? Parity::Even : Parity::Odd; }

SectorLabel sector_of(const MultiIndex& n, int p, int q) {
  if (p < 0 || q < 0 || p + q != n.modes()) {
    fail(ErrorCode::InvalidArgument, "sector split p + q must equal the number of modes");
  }
  int l = 0;
  for (int i = 0; i < n.modes(); ++i) l += (i < p ? 1 : -1) * n[i];
  return SectorLabel{parity_of(n), l, p, q};
}

double poisson_tail(double mean, int cutoff) {
  if (mean <= 0.0) return 0.0;
  if (cutoff < 0) return 1.0;
  int m = cutoff + 1;
  double term = std::exp(-mean + m * std::log(mean) - std::lgamma(m + 1.0));
  double sum = 0.0;
  for (;; ++m) {
    sum += term;
    if (m > mean && term <= 1e-18 * sum) break;
    if (term == 0.0 && m > mean) break;
    term *= mean / (m + 1);
  }
  return std::min(sum, 1.0);
}

double squared_norm(std::span<const cplx> alpha) {
  double s = 0.0;
  for (const auto& a : alpha) s += std::norm(a);
  return s;
}

double coherent_tail_bound(std::span<const cplx> alpha, int cutoff) {
  // The multinomial theorem collapses the shell sums to a single Poisson
  // distribution in n_tot with mean |alpha|^2.
  return poisson_tail(squared_norm(alpha), cutoff);
}

nlohmann::json basis_to_json(const FockBasis& basis) {
  return {{"modes", basis.modes()}, {"cutoff", basis.cutoff()}};
}

nlohmann::json state_to_json(const StateVector& v) {
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& [i, a] : v.amplitudes()) {
    amps.push_back({{"occupations", v.basis()->at(i).occ}, {"re", a.real()}, {"im", a.imag()}});
  }
  return {{"basis", basis_to_json(*v.basis())}, {"amplitudes", std::move(amps)}};
}

StateVector state_from_json(const nlohmann::json& j, BasisOptions options) {
  try {
    const auto& b = j.at("basis");
    auto basis = build_basis(b.at("modes").get<int>(), b.at("cutoff").get<int>(), options);
    StateVector::Amplitudes amps;
    for (const auto& rec : j.at("amplitudes")) {
      MultiIndex n{rec.at("occupations").get<std::vector<int>>()};
      const auto idx = basis->find(n);
      if (!idx) fail(ErrorCode::Parse, "occupations " + to_string(n) + " outside the declared basis");
      amps[*idx] += cplx{rec.at("re").get<double>(), rec.at("im").get<double>()};
    }
    return StateVector(basis, std::move(amps));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("malformed state JSON: ") + e.what());
  }
}

}  // namespace fockforge
