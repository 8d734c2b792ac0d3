#include <cmath>

#include "fockforge/error.hpp"
#include "fockforge/verify.hpp"

namespace fockforge {

namespace {

nlohmann::json sector_params(std::span<const cplx> alpha, int p, int q) {
  return {{"alpha", complex_vector_to_json(alpha)}, {"p", p}, {"q", q}};
}

}  // namespace

VerificationReport sector_orthogonality_check(std::span<const cplx> alpha, int p, int q, const std::vector<int>& ls,
                                              const BasisPtr& basis) {
  const std::vector<cplx> a(alpha.begin(), alpha.end());
  VerificationReport r;
  r.check = "sector-orthogonality";
  r.parameters = sector_params(alpha, p, q);
  r.parameters["l"] = ls;
  std::vector<UpqState> states;
  for (int l : ls) states.push_back(upq_bg_cs({p, q, l, a}, basis));
  double off = 0.0;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    for (std::size_t j = 0; j < ls.size(); ++j) {
      if (ls[i] != ls[j]) off = std::max(off, std::abs(inner_product(states[i].state, states[j].state)));
    }
  }
  r.lines.push_back(assert_line("off-diagonal sector overlaps vanish", off, 1e-13));
  nlohmann::json diag = nlohmann::json::object();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const double n2 = states[i].norm2;
    diag[std::to_string(ls[i])] = n2;
    r.lines.push_back(probe_line("diagonal norm^2 at l=" + std::to_string(ls[i]), n2));
    r.lines.push_back(probe_line("literal unit-diagonal deviation at l=" + std::to_string(ls[i]), std::abs(n2 - 1.0)));
  }
  r.data["diagonal_norm2"] = diag;

  const int c = basis->cutoff();
  const double r2 = squared_norm(alpha);
  double total = 0.0;
  for (int l = -c; l <= c; ++l) total += std::exp(-r2) * upq_bg_cs({p, q, l, a}, basis).norm2;
  r.lines.push_back(assert_line("weighted sector norms sum to 1", std::abs(total - 1.0), 1e-12,
                                coherent_tail_bound(alpha, c)));
  return r;
}

VerificationReport sector_structure_check(std::span<const cplx> alpha, int p, int q, const std::vector<int>& ls,
                                          const BasisPtr& basis) {
  const std::vector<cplx> a(alpha.begin(), alpha.end());
  VerificationReport r;
  r.check = "sector-structure";
  r.parameters = sector_params(alpha, p, q);
  r.parameters["l"] = ls;
  const double r2 = squared_norm(alpha);
  for (int l : ls) {
    const auto s = upq_bg_cs({p, q, l, a}, basis);
    const std::string tag = " at l=" + std::to_string(l);
    if (s.empty) {
      r.lines.push_back(probe_line("sector empty under the cutoff" + tag, 1.0));
      continue;
    }
    double outside = 0.0;
    for (const auto& [idx, amp] : s.state.amplitudes()) {
      if (sector_of(basis->at(idx), p, q).l != l) outside += std::norm(amp);
    }
    r.lines.push_back(assert_line("support outside the sector" + tag, outside, 0.0));
    const double scale = std::max(norm(s.state), 1e-300);
    r.lines.push_back(assert_line("L eigenvalue residual" + tag,
                                  eigen_residual(GeneratorSpec::l(p, q), s.state, double(l)) / scale, 1e-12));
    double worst = 0.0, budget = 0.0;
    for (int g = 1; g <= p; ++g) {
      for (int m = p + 1; m <= p + q; ++m) {
        const cplx lambda = a[static_cast<std::size_t>(g - 1)] * a[static_cast<std::size_t>(m - 1)];
        worst = std::max(worst, eigen_residual(GeneratorSpec::e(m, g), s.state, lambda));
        budget = std::max(budget, std::abs(lambda) * std::sqrt(std::exp(r2) * poisson_tail(r2, basis->cutoff() - 2)));
      }
    }
    r.lines.push_back(assert_line("a_m a_g eigen-residual" + tag, worst, 1e-12, budget));
  }
  return r;
}

VerificationReport glauber_reconstruction_check(std::span<const cplx> alpha, int p, int q, int l_min, int l_max,
                                                const BasisPtr& basis, std::optional<int> drop) {
  const std::vector<cplx> a(alpha.begin(), alpha.end());
  VerificationReport r;
  r.check = "glauber-reconstruction";
  r.parameters = sector_params(alpha, p, q);
  r.parameters["l_min"] = l_min;
  r.parameters["l_max"] = l_max;
  if (drop) r.parameters["drop"] = *drop;
  const double r2 = squared_norm(alpha);
  StateOptions force;
  force.force = true;
  const auto target = glauber_cs(alpha, basis, force);
  StateVector sum(basis);
  double dropped_weight = 0.0;
  double missing_budget = 0.0;
  for (int l = l_min; l <= l_max; ++l) {
    const auto s = upq_bg_cs({p, q, l, a}, basis);
    if (drop && *drop == l) {
      dropped_weight = std::exp(-r2) * s.norm2;
      continue;
    }
    sum = added(sum, scaled(std::exp(-0.5 * r2), s.state));
  }
  for (int l = -basis->cutoff(); l <= basis->cutoff(); ++l) {
    if (l < l_min || l > l_max) missing_budget += std::exp(-r2) * upq_bg_cs({p, q, l, a}, basis).norm2;
  }
  const double residual = norm(subtracted(sum, target));
  const double tail = coherent_tail_bound(alpha, basis->cutoff());
  if (!drop) {
    r.lines.push_back(assert_line("reconstruction residual", residual, 1e-10, std::sqrt(missing_budget) + tail));
  } else {
    r.lines.push_back(probe_line("residual^2 with one sector dropped", residual * residual));
    r.lines.push_back(probe_line("e^{-|a|^2} norm^2 of the dropped sector", dropped_weight));
    r.lines.push_back(assert_line("residual^2 equals the dropped weight", std::abs(residual * residual - dropped_weight),
                                  1e-12, missing_budget));
  }
  return r;
}

}  // namespace fockforge
