#include <doctest.h>

#include <cmath>
#include <random>

#include "fockforge/algebra.hpp"
#include "fockforge/error.hpp"

using namespace fockforge;
using G = GeneratorSpec;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

double interior_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, const FockBasis& basis, int margin) {
  const auto n = static_cast<Eigen::Index>(basis.shell_begin(basis.cutoff() - margin + 1));
  return (a.topLeftCorner(n, n) - b.topLeftCorner(n, n)).cwiseAbs().maxCoeff();
}

G random_spec(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 21 : 17);
  std::uniform_int_distribution<int> mode(1, 3);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  switch (kind(rng)) {
    case 0: return G::identity();
    case 1: return G::annihilate(mode(rng));
    case 2: return G::create(mode(rng));
    case 3: return G::e(mode(rng), mode(rng));
    case 4: return G::edag(mode(rng), mode(rng));
    case 5: return G::h(mode(rng), mode(rng));
    case 6: return G::k1();
    case 7: return G::k2();
    case 8: return G::k3();
    case 9: return G::k_minus();
    case 10: return G::k_plus();
    case 11: return G::mp(mode(rng), mode(rng));
    case 12: return G::mp_tilde(mode(rng), mode(rng));
    case 13: return G::mq(mode(rng), mode(rng));
    case 14: return G::mq_tilde(mode(rng), mode(rng));
    case 15: return G::l(1, 2);
    case 16: return G::su_k_minus(0.5 * mode(rng));
    case 17: return G::su_k3(1.5);
    case 18: return G::scale(cplx{coef(rng), kind(rng) % 2 ? coef(rng) : 0.0}, random_spec(rng, depth - 1));
    case 19: {
      std::vector<G> t;
      const int n = std::uniform_int_distribution<int>(0, 3)(rng);
      for (int i = 0; i < n; ++i) t.push_back(random_spec(rng, depth - 1));
      return G::sum(t);
    }
    default: {
      std::vector<G> t;
      const int n = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int i = 0; i < n; ++i) t.push_back(random_spec(rng, depth - 1));
      return G::product(t);
    }
  }
}

}  // namespace

TEST_CASE("ladder operators on number states") {
  const auto b = build_basis(2, 6);
  const auto s = basis_state(b, MultiIndex{{3, 1}});
  const auto down = apply_generator(G::annihilate(1), s);
  CHECK(down.amplitude(MultiIndex{{2, 1}}).real() == doctest::Approx(std::sqrt(3.0)));
  const auto up = apply_generator(G::create(2), s);
  CHECK(up.amplitude(MultiIndex{{3, 2}}).real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(up.truncation_loss() == 0.0);
  CHECK(apply_generator(G::annihilate(2), basis_state(b, MultiIndex{{2, 0}})).empty());
}

TEST_CASE("creation above the cutoff is recorded as loss") {
  const auto b = build_basis(1, 4);
  const auto top = basis_state(b, MultiIndex{{4}});
  const auto out = apply_generator(G::create(1), top);
  CHECK(out.empty());
  CHECK(out.truncation_loss() == doctest::Approx(5.0));
  // number-conserving words stay exact on the top shell
  const auto n = apply_generator(G::h(1, 1), top);
  CHECK(n.amplitude(MultiIndex{{4}}).real() == doctest::Approx(4.5));
  CHECK(n.truncation_loss() == 0.0);
}

TEST_CASE("composite generators match their definitions") {
  const auto b = build_basis(1, 10);
  const auto k1 = materialize(G::k1(), b);
  const auto k2 = materialize(G::k2(), b);
  const cplx i{0.0, 1.0};
  CHECK((k1 - i * k2 - materialize(G::k_minus(), b)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((k1 + i * k2 - materialize(G::k_plus(), b)).cwiseAbs().maxCoeff() < 1e-14);
  const auto k3 = materialize(G::k3(), b);
  for (Eigen::Index n = 0; n < k3.rows(); ++n) CHECK(k3(n, n).real() == doctest::Approx(0.5 * n + 0.25));

  const auto b2 = build_basis(2, 6);
  const auto h12 = materialize(G::h(1, 2), b2);
  const auto word = materialize(G::product({G::create(1), G::annihilate(2)}), b2);
  CHECK(interior_diff(h12, word, *b2, 1) < 1e-14);
  CHECK(materialize(G::e(2, 1), b2) == materialize(G::e(1, 2), b2));
}

TEST_CASE("product applies the right factor first") {
  const auto b = build_basis(1, 8);
  const auto aad = materialize(G::product({G::annihilate(1), G::create(1)}), b);
  const auto ada = materialize(G::product({G::create(1), G::annihilate(1)}), b);
  for (Eigen::Index n = 0; n < 8; ++n) {
    CHECK(aad(n, n).real() == doctest::Approx(n + 1.0));
    CHECK(ada(n, n).real() == doctest::Approx(double(n)));
  }
}

TEST_CASE("adjoint is the conjugate transpose on the interior") {
  const auto b = build_basis(2, 8);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto x = random_spec(rng, 2);
    const int margin = std::min(8, max_raise(x) + max_raise(adjoint(x)) + 1);
    if (margin >= 8) continue;
    bool two_mode = true;
    try {
      materialize(x, b);
    } catch (const Error&) {
      two_mode = false;  // one-mode-only generators
    }
    if (!two_mode) continue;
    CHECK(interior_diff(materialize(adjoint(x), b), materialize(x, b).adjoint(), *b, margin) < 1e-12);
  }
}

TEST_CASE("canonical commutator and margin validation") {
  const auto b = build_basis(2, 10);
  CHECK(commutator_residual(G::annihilate(1), G::create(1), G::identity(), b, 2) < 1e-14);
  CHECK(commutator_residual(G::annihilate(1), G::create(2), G::zero(), b, 2) < 1e-14);
  CHECK(code_of([&] { commutator_residual(G::edag(1, 1), G::edag(2, 2), G::zero(), b, 3); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { commutator_residual(G::identity(), G::zero(), G::zero(), b, 11); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("sp tables hold for two and three modes") {
  for (int modes : {2, 3}) {
    const auto b = build_basis(modes, 9);
    for (const auto& line : relations_suite(AlgebraName::Sp, {}, b)) {
      INFO(line.label << " worst at " << line.worst_case);
      CHECK(line.worst_residual < 1e-12);
      CHECK(line.cases > 0);
    }
  }
}

TEST_CASE("u(p,q) and su(1,1) relations") {
  RelationParams p;
  p.p = 2;
  p.q = 1;
  const auto lines = relations_suite(AlgebraName::Upq, p, build_basis(3, 9));
  CHECK(lines.size() >= 8);
  for (const auto& line : lines) {
    INFO(line.label);
    CHECK(line.worst_residual < 1e-12);
  }
  for (const auto& line : relations_suite(AlgebraName::Su11, {}, build_basis(1, 20))) {
    INFO(line.label);
    CHECK(line.worst_residual < 1e-12);
  }
  CHECK(std::is_sorted(lines.begin(), lines.end(), [](auto& a, auto& b) { return a.label < b.label; }));
}

TEST_CASE("a wrong relation is detected") {
  const auto b = build_basis(2, 8);
  // [E_11, Edag_11] = 4 H_11, not 2 H_11
  CHECK(commutator_residual(G::e(1, 1), G::edag(1, 1), 2.0 * G::h(1, 1), b, 4) > 1.0);
  CHECK(commutator_residual(G::e(1, 1), G::edag(1, 1), 4.0 * G::h(1, 1), b, 4) < 1e-12);
}

TEST_CASE("L is diagonal with integer sector labels") {
  const auto b = build_basis(3, 6);
  const auto l = materialize(G::l(2, 1), b);
  for (std::size_t n = 0; n < b->size(); ++n) {
    const auto idx = static_cast<Eigen::Index>(n);
    CHECK(l(idx, idx).real() == doctest::Approx(double(sector_of(b->at(n), 2, 1).l)));
    CHECK(l.col(idx).cwiseAbs().sum() == doctest::Approx(std::abs(l(idx, idx))));
  }
}

TEST_CASE("su(1,1) Casimir") {
  CHECK(casimir_su11_check(build_basis(1, 20)) < 1e-12);
}

TEST_CASE("abstract discrete series") {
  const auto b = build_basis(1, 12);
  CHECK(commutator_residual(G::su_k_minus(1.5), G::su_k_plus(1.5), 2.0 * G::su_k3(1.5), b, 2) < 1e-12);
  CHECK(code_of([&] { materialize(G::su_k3(0.3), b); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("text form round trips") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = random_spec(rng, 3);
    const auto text = to_string(x);
    INFO(text);
    const auto back = parse_generator(text);
    CHECK(back == x);
    CHECK(to_string(back) == text);
  }
}

TEST_CASE("text examples") {
  CHECK(to_string(parse_generator("E(1,2)")) == "E(1,2)");
  const auto x = parse_generator("0.5*K1 + Product(E(1,1),Edag(1,1))");
  CHECK(to_string(x) == "0.5*K1 + Product(E(1,1),Edag(1,1))");
  CHECK(parse_generator(" a(1) ") == G::annihilate(1));
  CHECK(parse_generator("Kminus") == G::k_minus());
  CHECK(parse_generator("2i*K3") == G::scale(cplx{0.0, 2.0}, G::k3()));
  CHECK(parse_generator("a(1)*adag(1)") == G::product({G::annihilate(1), G::create(1)}));
  CHECK(parse_generator("K1 - K2") == G::sum({G::k1(), G::scale(-1.0, G::k2())}));
}

TEST_CASE("parse errors name a column") {
  for (const char* bad : {"E(1,", "K1 + 2", "Foo(1)", "3", "E(1.5,2)", "K1 )"}) {
    INFO(bad);
    try {
      parse_generator(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Parse);
      CHECK(std::string(e.what()).find("column") != std::string::npos);
    }
  }
}
