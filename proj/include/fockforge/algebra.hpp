#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fockforge/fock.hpp"

namespace fockforge {

enum class GenKind {
  Identity,
  Annihilate,  // a_i
  Create,      // a+_i
  E,           // a_i a_j
  Edag,        // a+_i a+_j
  H,           // (a+_i a_j + a_j a+_i) / 2
  K1,          // (a^2 + a+^2) / 4, one mode
  K2,          // i (a^2 - a+^2) / 4, one mode
  K3,          // (2 a+ a + 1) / 4, one mode
  KMinus,      // K1 - i K2 = a^2 / 2
  KPlus,       // K1 + i K2 = a+^2 / 2
  Mp,          // (H_ab + H_ba - delta_ab) / 2
  MpTilde,     // i (H_ba - H_ab)
  Mq,
  MqTilde,
  L,           // sum_{a<=p} Mp(a,a) - sum_{m>p} Mq(m,m)
  SuKMinus,    // abstract discrete-series su(1,1) with Bargmann index k,
  SuKPlus,     // acting on ordinal n of a one-mode basis
  SuK3,
  Scale,
  Sum,
  Product,
};

/// Symbolic boson-quadratic operator. Mode indices are 1-based. E and Edag
/// store their index pair sorted, so E(i,j) == E(j,i).
struct GeneratorSpec {
  GenKind kind = GenKind::Identity;
  int i = 0;
  int j = 0;
  double k = 0.0;
  cplx coeff{1.0, 0.0};
  std::vector<GeneratorSpec> terms;

  static GeneratorSpec identity() { return {}; }
  static GeneratorSpec annihilate(int i);
  static GeneratorSpec create(int i);
  static GeneratorSpec e(int i, int j);
  static GeneratorSpec edag(int i, int j);
  static GeneratorSpec h(int i, int j);
  static GeneratorSpec k1();
  static GeneratorSpec k2();
  static GeneratorSpec k3();
  static GeneratorSpec k_minus();
  static GeneratorSpec k_plus();
  static GeneratorSpec mp(int a, int b);
  static GeneratorSpec mp_tilde(int a, int b);
  static GeneratorSpec mq(int m, int n);
  static GeneratorSpec mq_tilde(int m, int n);
  static GeneratorSpec l(int p, int q);
  static GeneratorSpec su_k_minus(double k);
  static GeneratorSpec su_k_plus(double k);
  static GeneratorSpec su_k3(double k);
  static GeneratorSpec scale(cplx c, GeneratorSpec spec);
  static GeneratorSpec sum(std::vector<GeneratorSpec> terms);
  static GeneratorSpec product(std::vector<GeneratorSpec> factors);
  static GeneratorSpec zero() { return sum({}); }

  bool operator==(const GeneratorSpec&) const = default;
};

GeneratorSpec operator+(GeneratorSpec a, GeneratorSpec b);
GeneratorSpec operator-(GeneratorSpec a, GeneratorSpec b);
GeneratorSpec operator*(cplx c, GeneratorSpec a);
GeneratorSpec operator*(GeneratorSpec a, GeneratorSpec b);
GeneratorSpec adjoint(const GeneratorSpec& spec);

/// Canonical text form, e.g. "0.5*K1 + Product(E(1,1),Edag(1,1))".
std::string to_string(const GeneratorSpec& spec);
/// Inverse of to_string; also accepts a(i), adag(i), Kminus/Km, Kplus/Kp,
/// juxtaposition with '*', '+', '-' and parentheses. Throws Parse errors.
GeneratorSpec parse_generator(const std::string& text);

/// Upper bound on the quanta an operator can add at any intermediate step.
int max_raise(const GeneratorSpec& spec);

/// Image of v. The product is evaluated exactly on the unbounded Fock
/// space and projected back onto v's basis once; the squared weight that
/// lands above the cutoff is added to the result's truncation_loss().
StateVector apply_generator(const GeneratorSpec& spec, const StateVector& v);

/// Column-by-column dense matrix of apply_generator on the basis.
Eigen::MatrixXcd materialize(const GeneratorSpec& spec, const BasisPtr& basis);

/// max over |n> with n_tot <= cutoff - margin of ||([A,B] - expected)|n>||,
/// with A and B applied one after another on the truncated space.
double commutator_residual(const GeneratorSpec& a, const GeneratorSpec& b, const GeneratorSpec& expected,
                           const BasisPtr& basis, int interior_margin = 4);

struct RelationCase {
  GeneratorSpec lhs_a;
  GeneratorSpec lhs_b;
  GeneratorSpec rhs;
  std::string label;
};

struct RelationLine {
  std::string label;
  double worst_residual = 0.0;
  std::size_t cases = 0;
  std::string worst_case;
};

enum class AlgebraName { Sp, Upq, Su11 };

AlgebraName parse_algebra_name(const std::string& name);
std::string to_string(AlgebraName name);

struct RelationParams {
  int p = 0;
  int q = 0;
  int interior_margin = 4;
};

/// Every relation case of the named algebra for a basis with `modes` modes.
std::vector<RelationCase> relation_cases(AlgebraName algebra, int modes, const RelationParams& params);

/// Worst residual per relation label, sorted by label.
std::vector<RelationLine> relations_suite(AlgebraName algebra, const RelationParams& params,
                                          const BasisPtr& basis);

/// max over interior |n> of ||(K3^2 - K1^2 - K2^2 + 3/16)|n>||.
double casimir_su11_check(const BasisPtr& basis, int interior_margin = 4);

}  // namespace fockforge
