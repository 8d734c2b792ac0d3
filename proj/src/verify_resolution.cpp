#include <chrono>
#include <cmath>
#include <numbers>

#include "fockforge/error.hpp"
#include "fockforge/parallel.hpp"
#include "fockforge/quadrature.hpp"
#include "fockforge/verify.hpp"

namespace fockforge {

namespace {

constexpr double kPi = std::numbers::pi;

const std::pair<FamilyKind, const char*> kFamilyNames[] = {
    {FamilyKind::Glauber, "glauber"},
    {FamilyKind::PhiCat, "phi_cat"},
    {FamilyKind::EvenProjection, "even"},
    {FamilyKind::OddProjection, "odd"},
    {FamilyKind::EvenNormalized, "even_normalized"},
    {FamilyKind::OddNormalized, "odd_normalized"},
    {FamilyKind::UpqAlpha, "upq_alpha"},
    {FamilyKind::UpqZ, "upq_z"},
    {FamilyKind::BGSu11, "bg_su11"},
};

}  // namespace

std::string to_string(FamilyKind kind) {
  for (const auto& [k, name] : kFamilyNames) {
    if (k == kind) return name;
  }
  return "?";
}

FamilyKind parse_family_kind(const std::string& name) {
  std::string known;
  for (const auto& [k, n] : kFamilyNames) {
    if (name == n) return k;
    known += known.empty() ? n : std::string(", ") + n;
  }
  fail(ErrorCode::InvalidArgument, "unknown family '" + name + "' (expected " + known + ")");
}

nlohmann::json family_to_json(const FamilySpec& f) {
  nlohmann::json j{{"kind", to_string(f.kind)}};
  switch (f.kind) {
    case FamilyKind::PhiCat:
      j["phi"] = f.phi;
      j["sign"] = f.sign;
      break;
    case FamilyKind::UpqAlpha:
    case FamilyKind::UpqZ:
      j["p"] = f.p;
      j["q"] = f.q;
      j["l"] = f.l;
      break;
    case FamilyKind::BGSu11:
      j["k"] = f.k;
      break;
    default:
      break;
  }
  return j;
}

namespace {

bool even(const MultiIndex& n) { return n.total() % 2 == 0; }

// Discrete, radius-independent factor multiplying the monomial amplitude.
cplx family_weight(const FamilySpec& f, const MultiIndex& n) {
  switch (f.kind) {
    case FamilyKind::Glauber:
    case FamilyKind::BGSu11:
      return 1.0;
    case FamilyKind::PhiCat:
      return std::polar(1.0, f.sign * (even(n) ? 1.0 : -1.0) * f.phi);
    case FamilyKind::EvenProjection:
    case FamilyKind::EvenNormalized:
      return even(n) ? 1.0 : 0.0;
    case FamilyKind::OddProjection:
    case FamilyKind::OddNormalized:
      return even(n) ? 0.0 : 1.0;
    case FamilyKind::UpqAlpha:
    case FamilyKind::UpqZ:
      return sector_of(n, f.p, f.q).l == f.l ? 1.0 : 0.0;
  }
  return 0.0;
}

void require_measure(bool ok, const FamilySpec& f, const MeasureSpec& m) {
  if (!ok) {
    fail(ErrorCode::InvalidArgument, "measure " + to_string(m.kind) + " does not match family " + to_string(f.kind));
  }
}

double angular_sum(int d, int order) {
  // (2 pi / A) sum_j e^{i d 2 pi j / A}, real part; the imaginary part is odd in d.
  double s = 0.0;
  for (int j = 0; j < order; ++j) s += std::cos(2.0 * kPi * d * j / order);
  return 2.0 * kPi * s / order;
}

struct Angular {
  int order;
  std::vector<double> table;  // by |a - b|
  explicit Angular(int order_, int max_occ) : order(order_) {
    for (int d = 0; d <= max_occ; ++d) table.push_back(angular_sum(d, order));
  }
  double operator()(int a, int b) const { return table[static_cast<std::size_t>(std::abs(a - b))]; }
};

void finish(ResolutionReport& r) {
  const auto& g = r.gram;
  r.gram_deviation = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double d = std::abs(g(i, j) - r.target(i, j));
      if (d > r.gram_deviation || !std::isfinite(d)) {
        r.gram_deviation = d;
        r.worst_row = r.probe[static_cast<std::size_t>(i)];
        r.worst_col = r.probe[static_cast<std::size_t>(j)];
      }
    }
  }
  r.hermiticity = g.rows() ? (g - g.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  if (g.rows()) {
    const Eigen::MatrixXcd h = 0.5 * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = solver.eigenvalues().minCoeff();
  }
}

// Per-mode moment tables for a product Gaussian density.
Eigen::MatrixXcd gaussian_gram(const FamilySpec& f, const MeasureSpec& m, const FockBasis& basis,
                               const std::vector<std::size_t>& probe, const ResolutionOptions& o, int max_occ) {
  const Rule gl = gauss_laguerre(o.radial_order);
  const Angular ang(o.angular_order, max_occ);
  // T(a,b) = (1/pi) (1/2) int e^{-t} t^{(a+b)/2} dt * angular / sqrt(a! b!)
  const auto size = static_cast<std::size_t>(max_occ) + 1;
  std::vector<std::vector<double>> table(size, std::vector<double>(size));
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b < size; ++b) {
      double radial = 0.0;
      for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        radial += gl.weights[k] * std::pow(gl.nodes[k], 0.5 * double(a + b));
      }
      const double norm = std::exp(-0.5 * (std::lgamma(a + 1.0) + std::lgamma(b + 1.0)));
      table[a][b] = radial * 0.5 / kPi * ang(int(a), int(b)) * norm;
    }
  }
  const auto n = static_cast<Eigen::Index>(probe.size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& mi = basis.at(probe[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& mj = basis.at(probe[static_cast<std::size_t>(j)]);
      cplx v = family_weight(f, mi) * std::conj(family_weight(f, mj)) * m.scale;
      for (int d = 0; d < basis.modes(); ++d) {
        v *= table[static_cast<std::size_t>(mi[d])][static_cast<std::size_t>(mj[d])];
      }
      g(i, j) = v;
    }
  }
  return g;
}

struct TensorSetup {
  int dims = 1;
  // ln of the real radial factor of probe state `m` at radii r (may return -inf).
  std::function<double(const MultiIndex&, std::span<const double>)> ln_radial;
  std::function<double(std::span<const double>)> density;
};

// sum over tensor nodes of weight * density * R_m R_n, then angular factors.
Eigen::MatrixXcd tensor_gram(const FamilySpec& f, const TensorSetup& setup, const std::vector<Rule>& rules,
                             const FockBasis& basis, const std::vector<std::size_t>& probe, const Angular& ang,
                             std::size_t& nodes_used) {
  std::size_t total = 1;
  for (const auto& r : rules) total *= r.nodes.size();
  nodes_used = total;
  const auto P = static_cast<Eigen::Index>(probe.size());
  std::vector<double> weight(total);
  Eigen::MatrixXd values(static_cast<Eigen::Index>(total), P);
  parallel_for(total, [&](std::size_t node) {
    std::vector<double> r(rules.size());
    double w = 1.0;
    std::size_t rest = node;
    for (std::size_t d = 0; d < rules.size(); ++d) {
      const auto k = rest % rules[d].nodes.size();
      rest /= rules[d].nodes.size();
      r[d] = rules[d].nodes[k];
      w *= rules[d].weights[k] * r[d];  // r dr
    }
    weight[node] = w * setup.density(r);
    for (Eigen::Index m = 0; m < P; ++m) {
      const double ln = setup.ln_radial(basis.at(probe[static_cast<std::size_t>(m)]), r);
      values(static_cast<Eigen::Index>(node), m) = std::exp(ln);
    }
  });
  const Eigen::Map<const Eigen::VectorXd> wv(weight.data(), static_cast<Eigen::Index>(total));
  const Eigen::MatrixXd radial = values.transpose() * wv.asDiagonal() * values;
  Eigen::MatrixXcd g(P, P);
  for (Eigen::Index i = 0; i < P; ++i) {
    const auto& mi = basis.at(probe[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < P; ++j) {
      const auto& mj = basis.at(probe[static_cast<std::size_t>(j)]);
      cplx v = family_weight(f, mi) * std::conj(family_weight(f, mj)) * radial(i, j);
      for (int d = 0; d < setup.dims; ++d) v *= ang(mi[d], mj[d]);
      g(i, j) = v;
    }
  }
  return g;
}

Rule pruned_rule(double h) {
  Rule full = exp_sinh_rule(1.0, h);
  Rule out;
  for (std::size_t k = 0; k < full.nodes.size(); ++k) {
    if (full.nodes[k] >= 1e-30 && full.nodes[k] <= 1e3) {
      out.nodes.push_back(full.nodes[k]);
      out.weights.push_back(full.weights[k]);
    }
  }
  return out;
}

}  // namespace

ResolutionReport resolve_identity(const FamilySpec& f, const MeasureSpec& m, const BasisPtr& basis,
                                  const ResolutionOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  if (o.angular_order < 2) fail(ErrorCode::InvalidArgument, "angular order must be at least 2");
  ResolutionReport r;
  r.family = family_to_json(f).dump();
  r.measure = measure_to_json(m);

  const int modes = basis->modes();
  switch (f.kind) {
    case FamilyKind::Glauber:
    case FamilyKind::PhiCat:
    case FamilyKind::EvenProjection:
    case FamilyKind::OddProjection:
      require_measure(m.kind == MeasureKind::GaussianGlauber && m.modes == modes, f, m);
      break;
    case FamilyKind::EvenNormalized:
    case FamilyKind::OddNormalized:
      require_measure(m.kind == MeasureKind::GaussianGlauber && m.modes == modes, f, m);
      if (modes != 1) fail(ErrorCode::InvalidArgument, "normalized even/odd families are checked on one mode");
      break;
    case FamilyKind::UpqAlpha:
      require_measure((m.kind == MeasureKind::UpqAlpha || m.kind == MeasureKind::GaussianGlauber) && m.modes == modes,
                      f, m);
      if (f.p + f.q != modes) fail(ErrorCode::InvalidArgument, "p + q must equal the basis mode count");
      break;
    case FamilyKind::UpqZ:
      require_measure((m.kind == MeasureKind::UpqZ || m.kind == MeasureKind::FujiiK) && m.p == f.p && m.q == f.q &&
                          m.l == f.l,
                      f, m);
      if (f.p + f.q != modes) fail(ErrorCode::InvalidArgument, "p + q must equal the basis mode count");
      break;
    case FamilyKind::BGSu11:
      require_measure(m.kind == MeasureKind::BGSu11 && m.k == f.k, f, m);
      if (modes != 1) fail(ErrorCode::InvalidArgument, "the BG ladder uses a one-mode basis");
      break;
  }

  if (o.probe.empty()) {
    const int top = std::min(basis->cutoff(), (o.angular_order - 2) / 2);
    for (std::size_t i = 0; i < basis->shell_begin(top + 1); ++i) r.probe.push_back(i);
  } else {
    r.probe = o.probe;
    for (auto i : r.probe) {
      if (i >= basis->size()) fail(ErrorCode::InvalidArgument, "probe ordinal " + std::to_string(i) + " is outside the basis");
    }
  }
  int max_occ = 0;
  for (auto i : r.probe) {
    for (int v : basis->at(i).occ) max_occ = std::max(max_occ, v);
  }
  if (o.angular_order < 2 * max_occ + 2) {
    fail(ErrorCode::InvalidArgument, "angular order " + std::to_string(o.angular_order) + " is below " +
                                         std::to_string(2 * max_occ + 2) + " needed for occupation " +
                                         std::to_string(max_occ));
  }

  // Expected operator on the probe.
  const auto P = static_cast<Eigen::Index>(r.probe.size());
  r.target = Eigen::MatrixXcd::Zero(P, P);
  for (Eigen::Index i = 0; i < P; ++i) {
    const auto& n = basis->at(r.probe[static_cast<std::size_t>(i)]);
    const bool in = o.full_identity || std::norm(family_weight(f, n)) > 0.0;
    r.target(i, i) = in ? 1.0 : 0.0;
  }
  switch (f.kind) {
    case FamilyKind::EvenProjection:
    case FamilyKind::EvenNormalized: r.expected = "parity_even"; break;
    case FamilyKind::OddProjection:
    case FamilyKind::OddNormalized: r.expected = "parity_odd"; break;
    case FamilyKind::UpqAlpha:
    case FamilyKind::UpqZ: r.expected = "sector l=" + std::to_string(f.l); break;
    default: r.expected = "identity"; break;
  }
  if (o.full_identity) r.expected = "identity";

  const bool factorized = f.kind == FamilyKind::Glauber || f.kind == FamilyKind::PhiCat ||
                          f.kind == FamilyKind::EvenProjection || f.kind == FamilyKind::OddProjection ||
                          f.kind == FamilyKind::UpqAlpha;
  if (factorized) {
    r.gram = gaussian_gram(f, m, *basis, r.probe, o, max_occ);
    r.radial_nodes = static_cast<std::size_t>(o.radial_order);
    r.angular_nodes = static_cast<std::size_t>(o.angular_order);
  } else {
    TensorSetup setup;
    const Angular ang(o.angular_order, max_occ);
    std::vector<Rule> rules;
    std::function<std::vector<Rule>(double)> make_rules;
    if (f.kind == FamilyKind::EvenNormalized || f.kind == FamilyKind::OddNormalized) {
      const bool odd = f.kind == FamilyKind::OddNormalized;
      setup.dims = 1;
      setup.density = [m](std::span<const double> r) { return measure_density(m, r); };
      setup.ln_radial = [odd](const MultiIndex& n, std::span<const double> r) {
        // 2 C(r) r^n / sqrt(n!) with C = 1/sqrt(2 (1 +- e^{-2 r^2}))
        const double r2 = r[0] * r[0];
        const double c2 = odd ? 1.0 / (2.0 * -std::expm1(-2.0 * r2)) : 1.0 / (2.0 * (1.0 + std::exp(-2.0 * r2)));
        return std::log(2.0) + 0.5 * std::log(c2) + n[0] * std::log(r[0]) - 0.5 * std::lgamma(n[0] + 1.0);
      };
    } else if (f.kind == FamilyKind::BGSu11) {
      const double k = f.k;
      const double nu = 2.0 * k - 1.0;
      setup.dims = 1;
      setup.density = [m](std::span<const double> r) { return measure_density(m, r); };
      setup.ln_radial = [k, nu](const MultiIndex& n, std::span<const double> r) {
        return n[0] * std::log(r[0]) - 0.5 * (std::lgamma(n[0] + 1.0) + std::lgamma(2.0 * k + n[0])) -
               0.5 * ln_reduced_bessel_i(nu, r[0] * r[0]);
      };
    } else {  // UpqZ
      setup.dims = modes - 1;
      setup.density = [m](std::span<const double> r) { return measure_density(m, r); };
      setup.ln_radial = [modes](const MultiIndex& n, std::span<const double> r) {
        double v = -0.5 * std::lgamma(n[modes - 1] + 1.0);
        for (int d = 0; d < modes - 1; ++d) v += n[d] * std::log(r[static_cast<std::size_t>(d)]) - 0.5 * std::lgamma(n[d] + 1.0);
        return v;
      };
    }
    Eigen::MatrixXcd previous;
    double h = 0.25;
    for (int level = 0; level < o.max_levels; ++level, h /= 2.0) {
      rules.assign(static_cast<std::size_t>(setup.dims), pruned_rule(h));
      std::size_t used = 0;
      Eigen::MatrixXcd g = tensor_gram(f, setup, rules, *basis, r.probe, ang, used);
      r.radial_nodes = used;
      const bool converged = level > 0 && (g - previous).cwiseAbs().maxCoeff() <= o.radial_tolerance;
      previous = std::move(g);
      if (converged) break;
    }
    r.gram = previous;
    r.angular_nodes = static_cast<std::size_t>(o.angular_order);
  }
  finish(r);
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

double opposite_parity_deviation(const ResolutionReport& report, const FockBasis& basis, FamilyKind family) {
  const bool family_even = family == FamilyKind::EvenProjection || family == FamilyKind::EvenNormalized;
  const bool family_odd = family == FamilyKind::OddProjection || family == FamilyKind::OddNormalized;
  if (!family_even && !family_odd) fail(ErrorCode::InvalidArgument, "opposite parity needs an even or odd family");
  double worst = 0.0;
  for (std::size_t i = 0; i < report.probe.size(); ++i) {
    if (even(basis.at(report.probe[i])) == family_even) continue;
    const auto e = static_cast<Eigen::Index>(i);
    worst = std::max(worst, std::abs(report.gram(e, e) - 1.0));
  }
  return worst;
}

}  // namespace fockforge
