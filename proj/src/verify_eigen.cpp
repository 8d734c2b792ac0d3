#include <cmath>
#include <numbers>

#include "fockforge/error.hpp"
#include "fockforge/verify.hpp"

namespace fockforge {

double eigen_residual(const GeneratorSpec& op, const StateVector& state, cplx eigenvalue) {
  return eigen_check(op, state, eigenvalue).residual;
}

EigenCheck eigen_check(const GeneratorSpec& op, const StateVector& state, cplx eigenvalue) {
  const auto image = apply_generator(op, state);
  return {norm(subtracted(image, scaled(eigenvalue, state))), image.truncation_loss() - state.truncation_loss()};
}

double shell_tail_budget(double eigen_abs, double coefficient_sum, double mean, int cutoff, int degree) {
  const int from = std::max(-1, cutoff - degree);
  return eigen_abs * coefficient_sum * std::sqrt(poisson_tail(mean, from));
}

Factorization factorization_check(const Eigen::MatrixXcd& z, double tolerance) {
  if (z.rows() != z.cols() || z.rows() < 1) fail(ErrorCode::InvalidArgument, "z must be a non-empty square matrix");
  const int n = static_cast<int>(z.rows());
  double scale = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (std::abs(z(i, j) - z(j, i)) > tolerance * std::max(1.0, std::abs(z(i, j)))) {
        fail(ErrorCode::InvalidArgument, "z must be symmetric; z(" + std::to_string(i + 1) + "," +
                                             std::to_string(j + 1) + ") != z(" + std::to_string(j + 1) + "," +
                                             std::to_string(i + 1) + ")");
      }
      scale = std::max(scale, std::norm(z(i, j)));
    }
  }
  Factorization out;
  auto consider = [&](int i, int j, int k, int l, cplx lhs, cplx rhs, const char* form) {
    const double v = std::abs(lhs - rhs);
    if (v > out.worst_violation) {
      out.worst_violation = v;
      out.worst_relation = {i + 1, j + 1, k + 1, l + 1};
      char buf[256];
      std::snprintf(buf, sizeof buf, "z%d%d z%d%d = %.6g%+.6gi but %s = %.6g%+.6gi", i + 1, j + 1, k + 1, l + 1,
                    lhs.real(), lhs.imag(), form, rhs.real(), rhs.imag());
      out.certificate = buf;
    }
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          const cplx a = z(i, j) * z(k, l);
          char f1[64], f2[64];
          std::snprintf(f1, sizeof f1, "z%d%d z%d%d", i + 1, k + 1, j + 1, l + 1);
          std::snprintf(f2, sizeof f2, "z%d%d z%d%d", i + 1, l + 1, j + 1, k + 1);
          consider(i, j, k, l, a, z(i, k) * z(j, l), f1);
          consider(i, j, k, l, a, z(i, l) * z(j, k), f2);
        }
      }
    }
  }
  if (out.worst_violation > tolerance * scale) return out;
  out.certificate.clear();
  out.worst_relation = {};
  out.factorizable = true;
  out.alpha.assign(static_cast<std::size_t>(n), cplx{});
  int pivot = -1;
  for (int r = 0; r < n && pivot < 0; ++r) {
    if (std::abs(z(r, r)) > tolerance * std::sqrt(scale)) pivot = r;
  }
  if (pivot >= 0) {
    const cplx ar = std::sqrt(z(pivot, pivot));
    for (int j = 0; j < n; ++j) out.alpha[static_cast<std::size_t>(j)] = j == pivot ? ar : z(pivot, j) / ar;
    out.gauge_note = "alpha and -alpha give the same z; alpha_" + std::to_string(pivot + 1) +
                     " is the principal square root of z_" + std::to_string(pivot + 1) + std::to_string(pivot + 1);
  } else {
    out.gauge_note = "z vanishes; alpha = 0";
  }
  return out;
}

VarianceReport variance_equality_report(const StateVector& state, int i, int j) {
  using G = GeneratorSpec;
  const G e = G::e(i, j);
  const G ed = G::edag(i, j);
  const G x = G::scale(0.5, e + ed);
  const G y = G::scale(cplx{0.0, 0.5}, e - ed);
  const double n = state.norm2();
  if (!(n > 0.0)) fail(ErrorCode::InvalidArgument, "variance needs a nonzero state");
  auto expect = [&](const G& op) { return inner_product(state, apply_generator(op, state)) / n; };
  VarianceReport out;
  const cplx mx = expect(x);
  const cplx my = expect(y);
  out.var_x = std::real(expect(G::product({x, x}))) - std::norm(mx);
  out.var_y = std::real(expect(G::product({y, y}))) - std::norm(my);
  out.difference = out.var_x - out.var_y;
  out.mean_e = expect(e);
  const auto lowered = subtracted(apply_generator(e, state), scaled(out.mean_e, state));
  const auto raised = subtracted(apply_generator(ed, state), scaled(std::conj(out.mean_e), state));
  const double raised_full = std::sqrt(raised.norm2() + raised.truncation_loss());
  out.budget = raised_full * norm(lowered) / n + 1e-13;
  return out;
}

namespace {

// Polynomial coefficient vectors, index = degree.
using Poly = std::vector<cplx>;

Poly times_z(const Poly& f) {
  Poly out(f.size() + 1);
  for (std::size_t n = 0; n < f.size(); ++n) out[n + 1] = f[n];
  return out;
}

Poly derivative(const Poly& f) {
  Poly out(f.empty() ? 0 : f.size() - 1);
  for (std::size_t n = 1; n < f.size(); ++n) out[n - 1] = double(n) * f[n];
  return out;
}

Poly combine(const Poly& a, cplx ca, const Poly& b, cplx cb) {
  Poly out(std::max(a.size(), b.size()));
  for (std::size_t n = 0; n < a.size(); ++n) out[n] += ca * a[n];
  for (std::size_t n = 0; n < b.size(); ++n) out[n] += cb * b[n];
  return out;
}

}  // namespace

VerificationReport analytic_rep_check(double k, int max_degree) {
  if (max_degree < 2) fail(ErrorCode::InvalidArgument, "analytic_rep_check needs max_degree >= 2");
  if (!(k > 0.0) || 2.0 * k != std::round(2.0 * k)) fail(ErrorCode::InvalidArgument, "Bargmann index must be a positive half-integer");
  // |n> <-> w_n z^n
  auto w = [&](int n) { return std::exp(-0.5 * (ln_gamma(n + 1.0) + ln_gamma(2.0 * k + n))); };
  auto kplus = [](const Poly& f) { return times_z(f); };
  auto kminus = [&](const Poly& f) {
    const Poly d1 = derivative(f);
    return combine(d1, 2.0 * k, times_z(derivative(d1)), 1.0);
  };
  auto k3 = [&](const Poly& f) { return combine(f, k, times_z(derivative(f)), 1.0); };
  auto monomial = [&](int n) {
    Poly f(static_cast<std::size_t>(n) + 1);
    f[static_cast<std::size_t>(n)] = w(n);
    return f;
  };
  const auto basis = build_basis(1, max_degree + 1);
  auto to_state = [&](const Poly& f) {
    StateVector::Amplitudes amps;
    for (std::size_t m = 0; m < f.size(); ++m) {
      if (f[m] != cplx{}) amps.emplace(m, f[m] / w(static_cast<int>(m)));
    }
    return StateVector(basis, std::move(amps));
  };
  const double tiny = 1e-300;
  double worst[3] = {0.0, 0.0, 0.0};
  for (int n = 0; n <= max_degree; ++n) {
    const auto ket = basis_state(basis, MultiIndex{{n}});
    const Poly f = monomial(n);
    const std::pair<Poly, GeneratorSpec> ops[3] = {{kplus(f), GeneratorSpec::su_k_plus(k)},
                                                   {kminus(f), GeneratorSpec::su_k_minus(k)},
                                                   {k3(f), GeneratorSpec::su_k3(k)}};
    for (int o = 0; o < 3; ++o) {
      const auto expected = apply_generator(ops[o].second, ket);
      const double scale = std::max(norm(expected), tiny + 1.0);
      worst[o] = std::max(worst[o], norm(subtracted(to_state(ops[o].first), expected)) / scale);
    }
  }
  double comm = 0.0;
  for (int n = 0; n <= max_degree - 2; ++n) {
    const Poly f = monomial(n);
    const Poly lhs = combine(kminus(kplus(f)), 1.0, kplus(kminus(f)), -1.0);
    const Poly rhs = combine(k3(f), 2.0, Poly{}, 0.0);
    const Poly diff = combine(lhs, 1.0, rhs, -1.0);
    double d = 0.0;
    for (std::size_t m = 0; m < diff.size(); ++m) d += std::norm(diff[m] / w(static_cast<int>(m)));
    comm = std::max(comm, std::sqrt(d) / (k + n));
  }
  VerificationReport r;
  r.check = "analytic-representation";
  r.parameters = {{"k", k}, {"max_degree", max_degree}};
  r.lines.push_back(assert_line("raising z matches ladder raising", worst[0], 1e-12));
  r.lines.push_back(assert_line("2k d/dz + z d2/dz2 matches ladder lowering", worst[1], 1e-12));
  r.lines.push_back(assert_line("k + z d/dz matches ladder weight", worst[2], 1e-12));
  r.lines.push_back(assert_line("[K-,K+] = 2K3 on polynomials", comm, 1e-12));
  return r;
}

VerificationReport phi_rep_check(double phi, int sign, int max_degree) {
  if (sign != 1 && sign != -1) fail(ErrorCode::InvalidArgument, "sign must be +1 or -1");
  if (max_degree < 1) fail(ErrorCode::InvalidArgument, "phi_rep_check needs max_degree >= 1");
  // f_n(alpha; phi) = alpha^n / sqrt(n!) e^{-+ i (-1)^n phi}
  auto represent = [&](const StateVector& psi, double angle) {
    Poly f(static_cast<std::size_t>(max_degree) + 2);
    for (const auto& [n, a] : psi.amplitudes()) {
      const double parity = n % 2 == 0 ? 1.0 : -1.0;
      f[n] = a * std::exp(-0.5 * ln_gamma(n + 1.0)) * std::polar(1.0, -sign * parity * angle);
    }
    return f;
  };
  auto distance = [](const Poly& a, const Poly& b) {
    double d = 0.0;
    for (std::size_t n = 0; n < std::max(a.size(), b.size()); ++n) {
      const cplx x = n < a.size() ? a[n] : cplx{};
      const cplx y = n < b.size() ? b[n] : cplx{};
      d = std::max(d, std::abs(x - y));
    }
    return d;
  };
  const auto basis = build_basis(1, max_degree + 1);
  double lower = 0.0, raise = 0.0, lower_swapped = 0.0, raise_swapped = 0.0;
  for (int n = 0; n <= max_degree; ++n) {
    const auto ket = basis_state(basis, MultiIndex{{n}});
    const Poly a_ket = represent(apply_generator(GeneratorSpec::annihilate(1), ket), phi);
    const Poly ad_ket = represent(apply_generator(GeneratorSpec::create(1), ket), phi);
    const Poly inverted = represent(ket, -phi);  // P f
    lower = std::max(lower, distance(a_ket, derivative(inverted)));
    raise = std::max(raise, distance(ad_ket, times_z(inverted)));
    lower_swapped = std::max(lower_swapped, distance(a_ket, times_z(inverted)));
    raise_swapped = std::max(raise_swapped, distance(ad_ket, derivative(inverted)));
  }
  VerificationReport r;
  r.check = "phi-representation";
  r.parameters = {{"phi", phi}, {"sign", sign}, {"max_degree", max_degree}};
  r.lines.push_back(assert_line("a acts as P d/dalpha", lower, 1e-13));
  r.lines.push_back(assert_line("a+ acts as P alpha", raise, 1e-13));
  r.lines.push_back(probe_line("swapped: a as P alpha", lower_swapped));
  r.lines.push_back(probe_line("swapped: a+ as P d/dalpha", raise_swapped));
  return r;
}

}  // namespace fockforge
