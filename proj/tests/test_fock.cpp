#include <doctest.h>

#include <cmath>
#include <random>

#include "fockforge/error.hpp"
#include "fockforge/fock.hpp"

using namespace fockforge;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("basis sizes are binomial") {
  CHECK(basis_size(1, 20) == 21);
  CHECK(basis_size(2, 12) == 91);
  CHECK(basis_size(3, 24) == 2925);
  for (int n = 1; n <= 4; ++n) {
    for (int c = 0; c <= 8; ++c) CHECK(build_basis(n, c)->size() == basis_size(n, c));
  }
}

TEST_CASE("total-degree order, descending in the first mode") {
  const auto b = build_basis(2, 2);
  const std::vector<std::vector<int>> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  REQUIRE(b->size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(b->at(i).occ == expected[i]);
  CHECK(b->shell_begin(2) == 3);

  const auto b3 = build_basis(3, 5);
  for (std::size_t i = 1; i < b3->size(); ++i) {
    const auto& prev = b3->at(i - 1);
    const auto& cur = b3->at(i);
    CHECK((prev.total() < cur.total() || (prev.total() == cur.total() && prev.occ > cur.occ)));
    CHECK(b3->index_of(cur) == i);
  }
}

TEST_CASE("basis rejects bad shapes and enforces the memory guard") {
  CHECK(code_of([] { build_basis(0, 3); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { build_basis(2, -1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { build_basis(6, 40); }) == ErrorCode::MemoryGuard);
  CHECK(code_of([] { build_basis(2, 10, BasisOptions{50}); }) == ErrorCode::MemoryGuard);
  const auto b = build_basis(2, 3);
  CHECK_FALSE(b->find(MultiIndex{{3, 1}}).has_value());
  CHECK(code_of([&] { b->index_of(MultiIndex{{4, 0}}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("state algebra and inner products") {
  const auto b = build_basis(2, 4);
  const auto u = basis_state(b, MultiIndex{{1, 2}});
  const auto v = basis_state(b, MultiIndex{{0, 1}});
  const auto w = added(scaled({0.0, 2.0}, u), v);
  CHECK(w.norm2() == doctest::Approx(5.0));
  CHECK(inner_product(u, w) == cplx{0.0, 2.0});
  CHECK(inner_product(w, u) == cplx{0.0, -2.0});
  CHECK(subtracted(w, w).empty());
  CHECK(w.dense().size() == b->size());

  const auto other = build_basis(2, 5);
  CHECK(code_of([&] { inner_product(u, basis_state(other, MultiIndex{{0, 0}})); }) == ErrorCode::BasisMismatch);
}

TEST_CASE("state JSON round trip") {
  const auto b = build_basis(3, 3);
  StateVector::Amplitudes a{{0, {0.5, 0.0}}, {7, {0.0, -0.25}}, {19, {0.1, 0.2}}};
  const StateVector s(b, a);
  const auto back = state_from_json(state_to_json(s));
  CHECK(back.basis()->same_shape(*b));
  CHECK(back.amplitudes() == s.amplitudes());
  CHECK(code_of([] { state_from_json(nlohmann::json{{"basis", 3}}); }) == ErrorCode::Parse);
}

TEST_CASE("poisson tail against direct complement") {
  for (double mean : {0.1, 1.0, 2.25, 6.75}) {
    for (int cutoff : {0, 3, 10, 24}) {
      double head = 0.0, term = std::exp(-mean);
      for (int m = 0; m <= cutoff; ++m) {
        head += term;
        term *= mean / (m + 1);
      }
      const double tail = poisson_tail(mean, cutoff);
      CHECK(tail >= 0.0);
      if (1.0 - head > 1e-10) CHECK(tail == doctest::Approx(1.0 - head).epsilon(1e-6));
    }
  }
  // deep tails keep relative precision
  CHECK(poisson_tail(1.0, 30) == doctest::Approx(std::exp(-1.0) / std::tgamma(32.0)).epsilon(0.05));
}

TEST_CASE("coherent tail uses the total mean") {
  std::vector<cplx> alpha{{0.8, 0.3}, {-0.5, 1.1}};
  CHECK(coherent_tail_bound(alpha, 12) == doctest::Approx(poisson_tail(squared_norm(alpha), 12)));
}

TEST_CASE("sector labels") {
  const auto s = sector_of(MultiIndex{{3, 1, 2}}, 2, 1);
  CHECK(s.l == 2);
  CHECK(s.parity == Parity::Even);
  CHECK(parity_of(MultiIndex{{1, 0, 0}}) == Parity::Odd);
  CHECK(code_of([] { sector_of(MultiIndex{{1, 1}}, 2, 1); }) == ErrorCode::InvalidArgument);
}
