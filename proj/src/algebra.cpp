#include "fockforge/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "fockforge/error.hpp"
#include "fockforge/parallel.hpp"

namespace fockforge {

namespace {

GeneratorSpec leaf(GenKind kind, int i = 0, int j = 0) {
  GeneratorSpec s;
  s.kind = kind;
  s.i = i;
  s.j = j;
  return s;
}

}  // namespace

GeneratorSpec GeneratorSpec::annihilate(int i) { return leaf(GenKind::Annihilate, i); }
GeneratorSpec GeneratorSpec::create(int i) { return leaf(GenKind::Create, i); }
GeneratorSpec GeneratorSpec::e(int i, int j) { return leaf(GenKind::E, std::min(i, j), std::max(i, j)); }
GeneratorSpec GeneratorSpec::edag(int i, int j) { return leaf(GenKind::Edag, std::min(i, j), std::max(i, j)); }
GeneratorSpec GeneratorSpec::h(int i, int j) { return leaf(GenKind::H, i, j); }
GeneratorSpec GeneratorSpec::k1() { return leaf(GenKind::K1); }
GeneratorSpec GeneratorSpec::k2() { return leaf(GenKind::K2); }
GeneratorSpec GeneratorSpec::k3() { return leaf(GenKind::K3); }
GeneratorSpec GeneratorSpec::k_minus() { return leaf(GenKind::KMinus); }
GeneratorSpec GeneratorSpec::k_plus() { return leaf(GenKind::KPlus); }
GeneratorSpec GeneratorSpec::mp(int a, int b) { return leaf(GenKind::Mp, a, b); }
GeneratorSpec GeneratorSpec::mp_tilde(int a, int b) { return leaf(GenKind::MpTilde, a, b); }
GeneratorSpec GeneratorSpec::mq(int m, int n) { return leaf(GenKind::Mq, m, n); }
GeneratorSpec GeneratorSpec::mq_tilde(int m, int n) { return leaf(GenKind::MqTilde, m, n); }
GeneratorSpec GeneratorSpec::l(int p, int q) { return leaf(GenKind::L, p, q); }

GeneratorSpec GeneratorSpec::su_k_minus(double k) {
  auto s = leaf(GenKind::SuKMinus);
  s.k = k;
  return s;
}
GeneratorSpec GeneratorSpec::su_k_plus(double k) {
  auto s = leaf(GenKind::SuKPlus);
  s.k = k;
  return s;
}
GeneratorSpec GeneratorSpec::su_k3(double k) {
  auto s = leaf(GenKind::SuK3);
  s.k = k;
  return s;
}

GeneratorSpec GeneratorSpec::scale(cplx c, GeneratorSpec spec) {
  GeneratorSpec s = leaf(GenKind::Scale);
  s.coeff = c;
  s.terms.push_back(std::move(spec));
  return s;
}

GeneratorSpec GeneratorSpec::sum(std::vector<GeneratorSpec> terms) {
  GeneratorSpec s = leaf(GenKind::Sum);
  s.terms = std::move(terms);
  return s;
}

GeneratorSpec GeneratorSpec::product(std::vector<GeneratorSpec> factors) {
  GeneratorSpec s = leaf(GenKind::Product);
  s.terms = std::move(factors);
  return s;
}

GeneratorSpec operator+(GeneratorSpec a, GeneratorSpec b) {
  std::vector<GeneratorSpec> terms;
  for (auto* x : {&a, &b}) {
    if (x->kind == GenKind::Sum) {
      for (auto& t : x->terms) terms.push_back(std::move(t));
    } else {
      terms.push_back(std::move(*x));
    }
  }
  return GeneratorSpec::sum(std::move(terms));
}

GeneratorSpec operator-(GeneratorSpec a, GeneratorSpec b) {
  return std::move(a) + GeneratorSpec::scale(-1.0, std::move(b));
}

GeneratorSpec operator*(cplx c, GeneratorSpec a) { return GeneratorSpec::scale(c, std::move(a)); }

GeneratorSpec operator*(GeneratorSpec a, GeneratorSpec b) {
  return GeneratorSpec::product({std::move(a), std::move(b)});
}

GeneratorSpec adjoint(const GeneratorSpec& s) {
  switch (s.kind) {
    case GenKind::Annihilate: return GeneratorSpec::create(s.i);
    case GenKind::Create: return GeneratorSpec::annihilate(s.i);
    case GenKind::E: return GeneratorSpec::edag(s.i, s.j);
    case GenKind::Edag: return GeneratorSpec::e(s.i, s.j);
    case GenKind::H: return GeneratorSpec::h(s.j, s.i);
    case GenKind::KMinus: return GeneratorSpec::k_plus();
    case GenKind::KPlus: return GeneratorSpec::k_minus();
    case GenKind::SuKMinus: return GeneratorSpec::su_k_plus(s.k);
    case GenKind::SuKPlus: return GeneratorSpec::su_k_minus(s.k);
    case GenKind::Scale: return GeneratorSpec::scale(std::conj(s.coeff), adjoint(s.terms.front()));
    case GenKind::Sum: {
      std::vector<GeneratorSpec> t;
      for (const auto& x : s.terms) t.push_back(adjoint(x));
      return GeneratorSpec::sum(std::move(t));
    }
    case GenKind::Product: {
      std::vector<GeneratorSpec> t;
      for (auto it = s.terms.rbegin(); it != s.terms.rend(); ++it) t.push_back(adjoint(*it));
      return GeneratorSpec::product(std::move(t));
    }
    default: return s;  // hermitian generators
  }
}

int max_raise(const GeneratorSpec& s) {
  switch (s.kind) {
    case GenKind::Create:
    case GenKind::H:
    case GenKind::K3:
    case GenKind::Mp:
    case GenKind::MpTilde:
    case GenKind::Mq:
    case GenKind::MqTilde:
    case GenKind::L:
    case GenKind::SuKPlus:
      return 1;
    case GenKind::Edag:
    case GenKind::K1:
    case GenKind::K2:
    case GenKind::KPlus:
      return 2;
    case GenKind::Scale: return max_raise(s.terms.front());
    case GenKind::Sum: {
      int r = 0;
      for (const auto& t : s.terms) r = std::max(r, max_raise(t));
      return r;
    }
    case GenKind::Product: {
      int r = 0;
      for (const auto& t : s.terms) r += max_raise(t);
      return r;
    }
    default: return 0;
  }
}

namespace {

using Ket = std::map<MultiIndex, cplx>;

struct Context {
  int modes;
};

void check_mode(const Context& ctx, int i) {
  if (i < 1 || i > ctx.modes) {
    fail(ErrorCode::InvalidArgument,
         "mode index " + std::to_string(i) + " outside 1.." + std::to_string(ctx.modes));
  }
}

void require_one_mode(const Context& ctx, const char* what) {
  if (ctx.modes != 1) fail(ErrorCode::InvalidArgument, std::string(what) + " acts on a one-mode basis only");
}

Ket ladder(const Ket& in, int mode, bool raise) {
  Ket out;
  const auto m = static_cast<std::size_t>(mode - 1);
  for (const auto& [n, a] : in) {
    MultiIndex r = n;
    if (raise) {
      r.occ[m] += 1;
      out[r] += a * std::sqrt(static_cast<double>(r.occ[m]));
    } else if (n.occ[m] > 0) {
      r.occ[m] -= 1;
      out[r] += a * std::sqrt(static_cast<double>(n.occ[m]));
    }
  }
  return out;
}

void add_into(Ket& into, const Ket& from, cplx factor = 1.0) {
  for (const auto& [n, a] : from) into[n] += factor * a;
}

Ket apply_exact(const GeneratorSpec& s, const Ket& in, const Context& ctx);

Ket apply_word(std::initializer_list<std::pair<int, bool>> right_to_left, const Ket& in) {
  Ket cur = in;
  for (const auto& [mode, raise] : right_to_left) cur = ladder(cur, mode, raise);
  return cur;
}

// (a+_i a_j + a_j a+_i) / 2, written out as two ladder words.
Ket apply_h(int i, int j, const Ket& in) {
  Ket out;
  add_into(out, apply_word({{j, false}, {i, true}}, in), 0.5);
  add_into(out, apply_word({{i, true}, {j, false}}, in), 0.5);
  return out;
}

Ket apply_su(const GeneratorSpec& s, const Ket& in) {
  if (!(s.k > 0.0) || std::abs(2.0 * s.k - std::round(2.0 * s.k)) > 1e-12) {
    fail(ErrorCode::InvalidArgument, "Bargmann index must be a positive half-integer");
  }
  const double k = s.k;
  Ket out;
  for (const auto& [n, a] : in) {
    const double m = n.occ[0];
    MultiIndex r = n;
    switch (s.kind) {
      case GenKind::SuKMinus:
        if (m == 0) break;
        r.occ[0] -= 1;
        out[r] += a * std::sqrt(m * (2.0 * k + m - 1.0));
        break;
      case GenKind::SuKPlus:
        r.occ[0] += 1;
        out[r] += a * std::sqrt((m + 1.0) * (2.0 * k + m));
        break;
      default:
        out[r] += a * (k + m);
        break;
    }
  }
  return out;
}

Ket apply_exact(const GeneratorSpec& s, const Ket& in, const Context& ctx) {
  switch (s.kind) {
    case GenKind::Identity: return in;
    case GenKind::Annihilate:
      check_mode(ctx, s.i);
      return ladder(in, s.i, false);
    case GenKind::Create:
      check_mode(ctx, s.i);
      return ladder(in, s.i, true);
    case GenKind::E:
      check_mode(ctx, s.i);
      check_mode(ctx, s.j);
      return apply_word({{s.j, false}, {s.i, false}}, in);
    case GenKind::Edag:
      check_mode(ctx, s.i);
      check_mode(ctx, s.j);
      return apply_word({{s.j, true}, {s.i, true}}, in);
    case GenKind::H:
      check_mode(ctx, s.i);
      check_mode(ctx, s.j);
      return apply_h(s.i, s.j, in);
    case GenKind::K1:
    case GenKind::K2: {
      require_one_mode(ctx, "K1/K2");
      const Ket lower = apply_word({{1, false}, {1, false}}, in);
      const Ket raise = apply_word({{1, true}, {1, true}}, in);
      Ket out;
      if (s.kind == GenKind::K1) {
        add_into(out, lower, 0.25);
        add_into(out, raise, 0.25);
      } else {
        add_into(out, lower, cplx{0.0, 0.25});
        add_into(out, raise, cplx{0.0, -0.25});
      }
      return out;
    }
    case GenKind::K3: {
      require_one_mode(ctx, "K3");
      Ket out;
      add_into(out, apply_word({{1, false}, {1, true}}, in), 0.5);
      add_into(out, in, 0.25);
      return out;
    }
    case GenKind::KMinus: {
      require_one_mode(ctx, "Kminus");
      Ket out;
      add_into(out, apply_word({{1, false}, {1, false}}, in), 0.5);
      return out;
    }
    case GenKind::KPlus: {
      require_one_mode(ctx, "Kplus");
      Ket out;
      add_into(out, apply_word({{1, true}, {1, true}}, in), 0.5);
      return out;
    }
    case GenKind::Mp:
    case GenKind::Mq: {
      check_mode(ctx, s.i);
      check_mode(ctx, s.j);
      Ket out;
      add_into(out, apply_h(s.i, s.j, in), 0.5);
      add_into(out, apply_h(s.j, s.i, in), 0.5);
      if (s.i == s.j) add_into(out, in, -0.5);
      return out;
    }
    case GenKind::MpTilde:
    case GenKind::MqTilde: {
      check_mode(ctx, s.i);
      check_mode(ctx, s.j);
      Ket out;
      add_into(out, apply_h(s.j, s.i, in), cplx{0.0, 1.0});
      add_into(out, apply_h(s.i, s.j, in), cplx{0.0, -1.0});
      return out;
    }
    case GenKind::L: {
      if (s.i < 1 || s.j < 1 || s.i + s.j != ctx.modes) {
        fail(ErrorCode::InvalidArgument, "L(p,q) needs p, q >= 1 and p + q equal to the number of modes");
      }
      Ket out;
      // Sum of Mp(a,a) minus sum of Mq(m,m): integer eigenvalue n_p - n_q.
      for (int m = 1; m <= ctx.modes; ++m) {
        const double sign = m <= s.i ? 1.0 : -1.0;
        add_into(out, apply_h(m, m, in), sign);
        add_into(out, in, -0.5 * sign);
      }
      return out;
    }
    case GenKind::SuKMinus:
    case GenKind::SuKPlus:
    case GenKind::SuK3:
      require_one_mode(ctx, "abstract su(1,1) generator");
      return apply_su(s, in);
    case GenKind::Scale: {
      Ket out;
      add_into(out, apply_exact(s.terms.front(), in, ctx), s.coeff);
      return out;
    }
    case GenKind::Sum: {
      Ket out;
      for (const auto& t : s.terms) add_into(out, apply_exact(t, in, ctx));
      return out;
    }
    case GenKind::Product: {
      Ket cur = in;
      for (auto it = s.terms.rbegin(); it != s.terms.rend(); ++it) cur = apply_exact(*it, cur, ctx);
      return cur;
    }
  }
  fail(ErrorCode::Internal, "unhandled generator kind");
}

}  // namespace

StateVector apply_generator(const GeneratorSpec& spec, const StateVector& v) {
  const auto& basis = *v.basis();
  Ket in;
  for (const auto& [idx, a] : v.amplitudes()) in.emplace(basis.at(idx), a);
  const Ket out = apply_exact(spec, in, Context{basis.modes()});
  StateVector::Amplitudes amps;
  double lost = 0.0;
  for (const auto& [n, a] : out) {
    if (n.total() <= basis.cutoff()) {
      amps.emplace(basis.index_of(n), a);
    } else {
      lost += std::norm(a);
    }
  }
  return StateVector(v.basis(), std::move(amps), v.truncation_loss() + lost);
}

Eigen::MatrixXcd materialize(const GeneratorSpec& spec, const BasisPtr& basis) {
  const auto n = static_cast<Eigen::Index>(basis->size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t col = 0; col < basis->size(); ++col) {
    const auto image = apply_generator(spec, basis_state(basis, basis->at(col)));
    for (const auto& [row, a] : image.amplitudes()) {
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = a;
    }
  }
  return m;
}

namespace {

void check_margin(const GeneratorSpec& a, const GeneratorSpec& b, const FockBasis& basis, int margin) {
  if (margin < 0 || margin > basis.cutoff()) {
    fail(ErrorCode::InvalidArgument, "interior margin " + std::to_string(margin) + " does not fit cutoff " +
                                         std::to_string(basis.cutoff()));
  }
  const int need = max_raise(a) + max_raise(b);
  if (margin < need) {
    fail(ErrorCode::InvalidArgument, "interior margin " + std::to_string(margin) +
                                         " is below the quanta the commutator can raise (" +
                                         std::to_string(need) + ")");
  }
}

double commutator_residual_at(const GeneratorSpec& a, const GeneratorSpec& b, const GeneratorSpec& expected,
                              const StateVector& ket) {
  const auto ab = apply_generator(a, apply_generator(b, ket));
  const auto ba = apply_generator(b, apply_generator(a, ket));
  const auto ex = apply_generator(expected, ket);
  return norm(subtracted(subtracted(ab, ba), ex));
}

}  // namespace

double commutator_residual(const GeneratorSpec& a, const GeneratorSpec& b, const GeneratorSpec& expected,
                           const BasisPtr& basis, int interior_margin) {
  check_margin(a, b, *basis, interior_margin);
  const std::size_t interior = basis->shell_begin(basis->cutoff() - interior_margin + 1);
  double worst = 0.0;
  for (std::size_t idx = 0; idx < interior; ++idx) {
    worst = std::max(worst, commutator_residual_at(a, b, expected, basis_state(basis, basis->at(idx))));
  }
  return worst;
}

AlgebraName parse_algebra_name(const std::string& name) {
  if (name == "sp") return AlgebraName::Sp;
  if (name == "u_pq" || name == "upq") return AlgebraName::Upq;
  if (name == "su11") return AlgebraName::Su11;
  fail(ErrorCode::InvalidArgument, "unknown algebra '" + name + "' (expected sp, u_pq or su11)");
}

std::string to_string(AlgebraName name) {
  switch (name) {
    case AlgebraName::Sp: return "sp";
    case AlgebraName::Upq: return "u_pq";
    case AlgebraName::Su11: return "su11";
  }
  return "?";
}

namespace {

int delta(int a, int b) { return a == b ? 1 : 0; }

// Table symbol H_xy is realized as H(y,x).
GeneratorSpec table_h(int x, int y) { return GeneratorSpec::h(y, x); }

GeneratorSpec combo(std::vector<std::pair<int, GeneratorSpec>> terms) {
  std::vector<GeneratorSpec> kept;
  for (auto& [c, s] : terms) {
    if (c == 0) continue;
    kept.push_back(c == 1 ? std::move(s) : GeneratorSpec::scale(static_cast<double>(c), std::move(s)));
  }
  return GeneratorSpec::sum(std::move(kept));
}

std::string idx(std::initializer_list<int> v) {
  std::string s;
  for (int x : v) s += std::to_string(x);
  return s;
}

void append_sp_table(std::vector<RelationCase>& out, const std::vector<int>& first_pair_a,
                     const std::vector<int>& first_pair_b, const std::vector<std::pair<int, int>>& h_pairs) {
  using G = GeneratorSpec;
  const std::string l_ee = "[E_ij,E_kl] = 0";
  const std::string l_dd = "[Edag_ij,Edag_kl] = 0";
  const std::string l_ed = "[E_ij,Edag_kl] = d_jk H_il + d_il H_jk + d_ik H_jl + d_jl H_ik";
  const std::string l_eh = "[E_ij,H_kl] = d_il E_jk + d_jl E_ik";
  const std::string l_dh = "[Edag_ij,H_kl] = -d_ik Edag_jl - d_jk Edag_il";
  const std::string l_hh = "[H_ij,H_kl] = d_il H_kj - d_jk H_il";

  std::vector<std::pair<int, int>> e_pairs;
  for (int i : first_pair_a) {
    for (int j : first_pair_b) e_pairs.emplace_back(i, j);
  }
  for (auto [i, j] : e_pairs) {
    for (auto [k, l] : e_pairs) {
      const std::string tag = " @" + idx({i, j, k, l});
      out.push_back({G::e(i, j), G::e(k, l), G::zero(), l_ee + tag});
      out.push_back({G::edag(i, j), G::edag(k, l), G::zero(), l_dd + tag});
      out.push_back({G::e(i, j), G::edag(k, l),
                     combo({{delta(j, k), table_h(i, l)},
                            {delta(i, l), table_h(j, k)},
                            {delta(i, k), table_h(j, l)},
                            {delta(j, l), table_h(i, k)}}),
                     l_ed + tag});
    }
    for (auto [k, l] : h_pairs) {
      const std::string tag = " @" + idx({i, j, k, l});
      out.push_back({G::e(i, j), table_h(k, l), combo({{delta(i, l), G::e(j, k)}, {delta(j, l), G::e(i, k)}}),
                     l_eh + tag});
      out.push_back({G::edag(i, j), table_h(k, l),
                     combo({{-delta(i, k), G::edag(j, l)}, {-delta(j, k), G::edag(i, l)}}), l_dh + tag});
    }
  }
  for (auto [i, j] : h_pairs) {
    for (auto [k, l] : h_pairs) {
      out.push_back({table_h(i, j), table_h(k, l), combo({{delta(i, l), table_h(k, j)}, {-delta(j, k), table_h(i, l)}}),
                     l_hh + " @" + idx({i, j, k, l})});
    }
  }
}

// Linear combinations of e_xy = a+_x a_y (plus identity) with the gl(N)
// bracket [e_ab, e_cd] = d_bc e_ad - d_da e_cb.
struct GlCombo {
  std::map<std::pair<int, int>, cplx> terms;
  cplx constant{};
};

GlCombo gl_bracket(const GlCombo& x, const GlCombo& y) {
  GlCombo out;
  for (const auto& [ab, cx] : x.terms) {
    for (const auto& [cd, cy] : y.terms) {
      const auto [a, b] = ab;
      const auto [c, d] = cd;
      if (b == c) out.terms[{a, d}] += cx * cy;
      if (d == a) out.terms[{c, b}] -= cx * cy;
    }
  }
  return out;
}

GlCombo gl_of_m(int a, int b, bool tilde) {
  GlCombo g;
  if (!tilde) {
    g.terms[{a, b}] += 0.5;
    g.terms[{b, a}] += 0.5;
  } else {
    g.terms[{b, a}] += cplx{0.0, 1.0};
    g.terms[{a, b}] += cplx{0.0, -1.0};
  }
  return g;
}

// e_xy = H(x,y) - delta_xy / 2.
GeneratorSpec spec_of(const GlCombo& g, int block_lo, int block_hi) {
  std::vector<GeneratorSpec> terms;
  cplx constant = g.constant;
  for (const auto& [xy, c] : g.terms) {
    if (c == cplx{}) continue;
    const auto [x, y] = xy;
    if (x < block_lo || x > block_hi || y < block_lo || y > block_hi) {
      fail(ErrorCode::Internal, "compact subalgebra bracket left its block");
    }
    terms.push_back(GeneratorSpec::scale(c, GeneratorSpec::h(x, y)));
    if (x == y) constant -= 0.5 * c;
  }
  if (constant != cplx{}) terms.push_back(GeneratorSpec::scale(constant, GeneratorSpec::identity()));
  return GeneratorSpec::sum(std::move(terms));
}

void append_compact_closure(std::vector<RelationCase>& out, int lo, int hi, bool p_block) {
  std::vector<std::pair<GeneratorSpec, GlCombo>> gens;
  for (int a = lo; a <= hi; ++a) {
    for (int b = lo; b <= hi; ++b) {
      gens.emplace_back(p_block ? GeneratorSpec::mp(a, b) : GeneratorSpec::mq(a, b), gl_of_m(a, b, false));
      gens.emplace_back(p_block ? GeneratorSpec::mp_tilde(a, b) : GeneratorSpec::mq_tilde(a, b),
                        gl_of_m(a, b, true));
    }
  }
  const std::string label = p_block ? "u(p) closure [M,M']" : "u(q) closure [M,M']";
  for (const auto& [x, gx] : gens) {
    for (const auto& [y, gy] : gens) {
      out.push_back({x, y, spec_of(gl_bracket(gx, gy), lo, hi), label + " @" + to_string(x) + "," + to_string(y)});
    }
  }
}

}  // namespace

std::vector<RelationCase> relation_cases(AlgebraName algebra, int modes, const RelationParams& params) {
  using G = GeneratorSpec;
  std::vector<RelationCase> out;
  switch (algebra) {
    case AlgebraName::Su11: {
      if (modes != 1) fail(ErrorCode::InvalidArgument, "su11 relations need a one-mode basis");
      out.push_back({G::k3(), G::k_plus(), G::k_plus(), "[K3,K+] = +K+"});
      out.push_back({G::k3(), G::k_minus(), G::scale(-1.0, G::k_minus()), "[K3,K-] = -K-"});
      out.push_back({G::k_minus(), G::k_plus(), G::scale(2.0, G::k3()), "[K-,K+] = 2K3"});
      break;
    }
    case AlgebraName::Sp: {
      std::vector<int> all;
      std::vector<std::pair<int, int>> hp;
      for (int i = 1; i <= modes; ++i) all.push_back(i);
      for (int i : all) {
        for (int j : all) hp.emplace_back(i, j);
      }
      append_sp_table(out, all, all, hp);
      break;
    }
    case AlgebraName::Upq: {
      const int p = params.p;
      const int q = params.q;
      if (p < 1 || q < 1 || p + q != modes) {
        fail(ErrorCode::InvalidArgument, "u_pq relations need p, q >= 1 with p + q = modes");
      }
      std::vector<int> pi, qi;
      for (int i = 1; i <= p; ++i) pi.push_back(i);
      for (int i = p + 1; i <= modes; ++i) qi.push_back(i);
      std::vector<std::pair<int, int>> hp;
      for (int a : pi) {
        for (int b : pi) hp.emplace_back(a, b);
      }
      for (int m : qi) {
        for (int n : qi) hp.emplace_back(m, n);
      }
      append_sp_table(out, pi, qi, hp);

      std::vector<G> generators;
      for (int a : pi) {
        for (int m : qi) {
          generators.push_back(G::e(a, m));
          generators.push_back(G::edag(a, m));
        }
      }
      for (auto [x, y] : hp) generators.push_back(G::h(x, y));
      for (const auto& g : generators) {
        out.push_back({G::l(p, q), g, G::zero(), "[L,g] = 0 @" + to_string(g)});
      }
      append_compact_closure(out, 1, p, true);
      append_compact_closure(out, p + 1, modes, false);
      break;
    }
  }
  return out;
}

std::vector<RelationLine> relations_suite(AlgebraName algebra, const RelationParams& params, const BasisPtr& basis) {
  const auto cases = relation_cases(algebra, basis->modes(), params);
  for (const auto& c : cases) check_margin(c.lhs_a, c.lhs_b, *basis, params.interior_margin);
  const std::size_t interior = basis->shell_begin(basis->cutoff() - params.interior_margin + 1);

  std::vector<double> residuals(cases.size(), 0.0);
  parallel_for(cases.size(), [&](std::size_t c) {
    double worst = 0.0;
    for (std::size_t idx = 0; idx < interior; ++idx) {
      worst = std::max(worst, commutator_residual_at(cases[c].lhs_a, cases[c].lhs_b, cases[c].rhs,
                                                     basis_state(basis, basis->at(idx))));
    }
    residuals[c] = worst;
  });

  std::map<std::string, RelationLine> lines;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& label = cases[c].label;
    const auto at = label.find(" @");
    const std::string line = at == std::string::npos ? label : label.substr(0, at);
    auto& entry = lines[line];
    entry.label = line;
    entry.cases += 1;
    if (residuals[c] > entry.worst_residual || entry.worst_case.empty()) {
      if (residuals[c] >= entry.worst_residual) {
        entry.worst_residual = residuals[c];
        entry.worst_case = label;
      }
    }
  }
  std::vector<RelationLine> out;
  for (auto& [_, l] : lines) out.push_back(std::move(l));
  return out;
}

double casimir_su11_check(const BasisPtr& basis, int interior_margin) {
  if (basis->modes() != 1) fail(ErrorCode::InvalidArgument, "the su(1,1) Casimir check needs a one-mode basis");
  using G = GeneratorSpec;
  const G casimir = G::sum({G::product({G::k3(), G::k3()}), G::scale(-1.0, G::product({G::k1(), G::k1()})),
                            G::scale(-1.0, G::product({G::k2(), G::k2()})), G::scale(3.0 / 16.0, G::identity())});
  check_margin(casimir, G::identity(), *basis, interior_margin);
  const std::size_t interior = basis->shell_begin(basis->cutoff() - interior_margin + 1);
  double worst = 0.0;
  for (std::size_t idx = 0; idx < interior; ++idx) {
    worst = std::max(worst, norm(apply_generator(casimir, basis_state(basis, basis->at(idx)))));
  }
  return worst;
}

}  // namespace fockforge
