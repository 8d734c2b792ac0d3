#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "fockforge/algebra.hpp"
#include "fockforge/error.hpp"

namespace fockforge {

namespace {

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_coeff(cplx c) {
  if (c.imag() == 0.0) return fmt_real(c.real());
  return "(" + fmt_real(c.real()) + (std::signbit(c.imag()) ? "-" : "+") + fmt_real(std::abs(c.imag())) + "i)";
}

std::string pair_args(const char* name, int a, int b) {
  return std::string(name) + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

bool is_infix_sum(const GeneratorSpec& s) { return s.kind == GenKind::Sum && s.terms.size() >= 2; }

std::string print(const GeneratorSpec& s);

std::string print_list(const char* name, const std::vector<GeneratorSpec>& terms) {
  std::string out = std::string(name) + "(";
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (t) out += ",";
    out += print(terms[t]);
  }
  return out + ")";
}

std::string print(const GeneratorSpec& s) {
  switch (s.kind) {
    case GenKind::Identity: return "Id";
    case GenKind::Annihilate: return "a(" + std::to_string(s.i) + ")";
    case GenKind::Create: return "adag(" + std::to_string(s.i) + ")";
    case GenKind::E: return pair_args("E", s.i, s.j);
    case GenKind::Edag: return pair_args("Edag", s.i, s.j);
    case GenKind::H: return pair_args("H", s.i, s.j);
    case GenKind::K1: return "K1";
    case GenKind::K2: return "K2";
    case GenKind::K3: return "K3";
    case GenKind::KMinus: return "Km";
    case GenKind::KPlus: return "Kp";
    case GenKind::Mp: return pair_args("Mp", s.i, s.j);
    case GenKind::MpTilde: return pair_args("Mp_tilde", s.i, s.j);
    case GenKind::Mq: return pair_args("Mq", s.i, s.j);
    case GenKind::MqTilde: return pair_args("Mq_tilde", s.i, s.j);
    case GenKind::L: return pair_args("L", s.i, s.j);
    case GenKind::SuKMinus: return "SuKm(" + fmt_real(s.k) + ")";
    case GenKind::SuKPlus: return "SuKp(" + fmt_real(s.k) + ")";
    case GenKind::SuK3: return "SuK3(" + fmt_real(s.k) + ")";
    case GenKind::Scale: {
      const auto& inner = s.terms.front();
      const bool wrap = is_infix_sum(inner) || inner.kind == GenKind::Scale;
      return fmt_coeff(s.coeff) + "*" + (wrap ? "(" + print(inner) + ")" : print(inner));
    }
    case GenKind::Sum: {
      if (s.terms.size() < 2) return print_list("Sum", s.terms);
      std::string out;
      for (std::size_t t = 0; t < s.terms.size(); ++t) {
        if (t) out += " + ";
        out += is_infix_sum(s.terms[t]) ? "(" + print(s.terms[t]) + ")" : print(s.terms[t]);
      }
      return out;
    }
    case GenKind::Product: return print_list("Product", s.terms);
  }
  return "?";
}

struct Value {
  bool scalar = false;
  cplx c{};
  GeneratorSpec op;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : src_(text) {}

  GeneratorSpec run() {
    Value v = expr();
    skip();
    if (pos_ != src_.size()) error("unexpected '" + std::string(1, src_[pos_]) + "'");
    if (v.scalar) error("expression is a number, not an operator");
    return v.op;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::Parse, "generator text at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char ch) {
    if (!accept(ch)) error(std::string("expected '") + ch + "'");
  }

  static bool ident_char(char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; }

  Value expr() {
    std::vector<Value> terms;
    terms.push_back(term());
    while (true) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        Value t = term();
        if (t.scalar) {
          t.c = -t.c;
        } else {
          t.op = GeneratorSpec::scale(-1.0, std::move(t.op));
        }
        terms.push_back(std::move(t));
      } else {
        break;
      }
    }
    if (terms.size() == 1) return std::move(terms.front());
    bool all_scalar = true;
    bool any_scalar = false;
    for (const auto& t : terms) {
      all_scalar = all_scalar && t.scalar;
      any_scalar = any_scalar || t.scalar;
    }
    if (all_scalar) {
      Value v;
      v.scalar = true;
      for (const auto& t : terms) v.c += t.c;
      return v;
    }
    if (any_scalar) error("cannot add a number to an operator (write c*Id)");
    std::vector<GeneratorSpec> ops;
    for (auto& t : terms) ops.push_back(std::move(t.op));
    Value v;
    v.op = GeneratorSpec::sum(std::move(ops));
    return v;
  }

  Value term() {
    cplx coeff{1.0, 0.0};
    bool have_coeff = false;
    std::vector<GeneratorSpec> ops;
    do {
      Value f = factor();
      if (f.scalar) {
        coeff *= f.c;
        have_coeff = true;
      } else {
        ops.push_back(std::move(f.op));
      }
    } while (accept('*'));
    Value v;
    if (ops.empty()) {
      v.scalar = true;
      v.c = coeff;
      return v;
    }
    v.op = ops.size() == 1 ? std::move(ops.front()) : GeneratorSpec::product(std::move(ops));
    if (have_coeff) v.op = GeneratorSpec::scale(coeff, std::move(v.op));
    return v;
  }

  Value factor() {
    skip();
    if (pos_ >= src_.size()) error("unexpected end of input");
    const char ch = src_[pos_];
    if (ch == '-') {
      ++pos_;
      Value v = factor();
      if (v.scalar) {
        v.c = -v.c;
      } else {
        v.op = GeneratorSpec::scale(-1.0, std::move(v.op));
      }
      return v;
    }
    if (ch == '(') {
      ++pos_;
      Value v = expr();
      expect(')');
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(ch))) return named();
    error("unexpected '" + std::string(1, ch) + "'");
  }

  Value number() {
    const char* begin = src_.c_str() + pos_;
    char* end = nullptr;
    const double x = std::strtod(begin, &end);
    if (end == begin) error("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    Value v;
    v.scalar = true;
    if (pos_ < src_.size() && src_[pos_] == 'i' && (pos_ + 1 == src_.size() || !ident_char(src_[pos_ + 1]))) {
      ++pos_;
      v.c = cplx{0.0, x};
    } else {
      v.c = cplx{x, 0.0};
    }
    return v;
  }

  double real_arg() {
    Value v = expr();
    if (!v.scalar || v.c.imag() != 0.0) error("expected a real number");
    return v.c.real();
  }

  int int_arg() {
    const double x = real_arg();
    if (x != std::floor(x) || std::abs(x) > 1e6) error("expected an integer");
    return static_cast<int>(x);
  }

  std::vector<int> int_args(std::size_t count) {
    expect('(');
    std::vector<int> out;
    for (std::size_t n = 0; n < count; ++n) {
      if (n) expect(',');
      out.push_back(int_arg());
    }
    expect(')');
    return out;
  }

  std::vector<GeneratorSpec> op_list() {
    expect('(');
    std::vector<GeneratorSpec> out;
    if (accept(')')) return out;
    do {
      Value v = expr();
      if (v.scalar) error("expected an operator argument");
      out.push_back(std::move(v.op));
    } while (accept(','));
    expect(')');
    return out;
  }

  Value named() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
    const std::string name = src_.substr(start, pos_ - start);
    using G = GeneratorSpec;
    Value v;
    auto two = [&](G (*make)(int, int)) {
      const auto a = int_args(2);
      return make(a[0], a[1]);
    };
    if (name == "a" || name == "Annihilate") {
      v.op = G::annihilate(int_args(1)[0]);
    } else if (name == "adag" || name == "Create") {
      v.op = G::create(int_args(1)[0]);
    } else if (name == "E") {
      v.op = two(&G::e);
    } else if (name == "Edag") {
      v.op = two(&G::edag);
    } else if (name == "H") {
      v.op = two(&G::h);
    } else if (name == "Mp") {
      v.op = two(&G::mp);
    } else if (name == "Mp_tilde") {
      v.op = two(&G::mp_tilde);
    } else if (name == "Mq") {
      v.op = two(&G::mq);
    } else if (name == "Mq_tilde") {
      v.op = two(&G::mq_tilde);
    } else if (name == "L") {
      v.op = two(&G::l);
    } else if (name == "K1") {
      v.op = G::k1();
    } else if (name == "K2") {
      v.op = G::k2();
    } else if (name == "K3") {
      v.op = G::k3();
    } else if (name == "Km" || name == "Kminus") {
      v.op = G::k_minus();
    } else if (name == "Kp" || name == "Kplus") {
      v.op = G::k_plus();
    } else if (name == "Id") {
      v.op = G::identity();
    } else if (name == "SuKm" || name == "SuKp" || name == "SuK3") {
      expect('(');
      const double k = real_arg();
      expect(')');
      v.op = name == "SuKm" ? G::su_k_minus(k) : name == "SuKp" ? G::su_k_plus(k) : G::su_k3(k);
    } else if (name == "Scale") {
      expect('(');
      Value c = expr();
      if (!c.scalar) error("Scale expects a number first");
      expect(',');
      Value x = expr();
      if (x.scalar) error("Scale expects an operator second");
      expect(')');
      v.op = G::scale(c.c, std::move(x.op));
    } else if (name == "Sum") {
      v.op = G::sum(op_list());
    } else if (name == "Product") {
      v.op = G::product(op_list());
    } else {
      pos_ = start;
      error("unknown generator '" + name + "'");
    }
    return v;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const GeneratorSpec& spec) { return print(spec); }

GeneratorSpec parse_generator(const std::string& text) { return Parser(text).run(); }

}  // namespace fockforge
