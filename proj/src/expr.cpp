#include "fockbench/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace fockbench {

// --------------------------------------------------------- scaled values

ScaledValue normalize(ScaledValue x) {
  const double a = std::abs(x.m);
  if (a == 0.0 || !std::isfinite(a)) {
    if (a == 0.0) x.s = 0.0;
    return x;
  }
  if (a > 1e100 || a < 1e-100) {
    x.s += std::log(a);
    x.m /= a;
  }
  return x;
}

ScaledValue scaled_add(ScaledValue a, ScaledValue b) {
  if (a.m == 0.0) return b;
  if (b.m == 0.0) return a;
  if (a.s >= b.s) return normalize({a.m + b.m * std::exp(b.s - a.s), a.s});
  return normalize({b.m + a.m * std::exp(a.s - b.s), b.s});
}

ScaledValue scaled_mul(ScaledValue a, ScaledValue b) { return normalize({a.m * b.m, a.s + b.s}); }

double ScaledValue::log_abs() const {
  const double a = std::abs(m);
  if (a == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(a) + s;
}


namespace {

constexpr int kMaxPolynomialDegree = 4096;

NodePtr make_node(NodeKind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_const(cplx v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->value = v;
  return n;
}

NodePtr make_var() { return make_node(NodeKind::Variable); }

bool is_const(const NodePtr& n) { return n->kind == NodeKind::Constant; }
bool is_const_value(const NodePtr& n, cplx v) { return is_const(n) && n->value == v; }

cplx ipow(cplx base, unsigned n) {
  cplx acc{1.0, 0.0};
  for (unsigned i = 0; i < n; ++i) acc *= base;
  return acc;
}

// Smart constructors. Constant folding uses exactly the arithmetic the
// evaluator would perform, so folded and unfolded trees agree bitwise.
NodePtr make_add(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_const(a->value + b->value);
  if (is_const_value(a, 0.0)) return b;
  if (is_const_value(b, 0.0)) return a;
  return make_node(NodeKind::Add, std::move(a), std::move(b));
}

NodePtr make_neg(NodePtr a) {
  if (is_const(a)) return make_const(-a->value);
  if (a->kind == NodeKind::Neg) return a->lhs;
  return make_node(NodeKind::Neg, std::move(a));
}

NodePtr make_sub(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_const(a->value - b->value);
  if (is_const_value(b, 0.0)) return a;
  if (is_const_value(a, 0.0)) return make_neg(std::move(b));
  return make_node(NodeKind::Sub, std::move(a), std::move(b));
}

NodePtr make_mul(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_const(a->value * b->value);
  if (is_const_value(a, 0.0) || is_const_value(b, 0.0)) return make_const(0.0);
  if (is_const_value(a, 1.0)) return b;
  if (is_const_value(b, 1.0)) return a;
  return make_node(NodeKind::Mul, std::move(a), std::move(b));
}

NodePtr make_pow(NodePtr a, unsigned n) {
  if (n == 0) return make_const(1.0);
  if (n == 1) return a;
  if (is_const(a)) return make_const(ipow(a->value, n));
  auto node = std::make_shared<Node>();
  node->kind = NodeKind::Pow;
  node->power = n;
  node->lhs = std::move(a);
  return node;
}

NodePtr make_exp(NodePtr a) {
  if (is_const(a)) return make_const(std::exp(a->value));
  return make_node(NodeKind::Exp, std::move(a));
}

// ---------------------------------------------------------------- parser

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(pos_), pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  NodePtr expr() {
    NodePtr acc = term();
    for (;;) {
      if (eat('+')) {
        acc = make_add(acc, term());
      } else if (eat('-')) {
        acc = make_sub(acc, term());
      } else {
        return acc;
      }
    }
  }

  NodePtr term() {
    NodePtr acc = unary();
    while (eat('*')) acc = make_mul(acc, unary());
    return acc;
  }

  NodePtr unary() {
    if (eat('-')) return make_neg(unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    while (eat('^')) {
      skip_ws();
      if (pos_ >= text_.size()) fail("expected exponent at end of input");
      if (text_[pos_] == '-') fail("negative exponent");
      if (!std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("exponent must be a nonnegative integer literal");
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E'))
        fail("fractional exponent");
      unsigned n = 0;
      auto res = std::from_chars(text_.data() + start, text_.data() + pos_, n);
      if (res.ec != std::errc{} || n > 100000) fail("exponent out of range");
      base = make_pow(base, n);
    }
    return base;
  }

  double number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (res.ec != std::errc{} || res.ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return v;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = number();
      if (pos_ < text_.size() && text_[pos_] == 'i' &&
          (pos_ + 1 >= text_.size() || !ident_char(text_[pos_ + 1]))) {
        ++pos_;
        return make_const(cplx{0.0, v});
      }
      return make_const(cplx{v, 0.0});
    }
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!eat(')')) {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected ')' at end of input");
        fail("expected ')'");
      }
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      std::string_view id = text_.substr(start, pos_ - start);
      if (id == "z") return make_var();
      if (id == "i") return make_const(cplx{0.0, 1.0});
      if (id == "exp") {
        if (!eat('(')) fail("expected '(' after exp");
        NodePtr arg = expr();
        if (!eat(')')) {
          skip_ws();
          if (pos_ >= text_.size()) fail("expected ')' at end of input");
          fail("expected ')'");
        }
        return make_exp(arg);
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(id) + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }
};

// --------------------------------------------------------------- printer

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_const(cplx v) {
  const double re = v.real();
  const double im = v.imag();
  if (im == 0.0) {
    if (std::signbit(re)) return "(-" + fmt_real(-re) + ")";
    return fmt_real(re);
  }
  std::string ims = fmt_real(std::abs(im)) + "i";
  if (re == 0.0) return im < 0 ? "(-" + ims + ")" : ims;
  std::string res = std::signbit(re) ? "-" + fmt_real(-re) : fmt_real(re);
  return "(" + res + (im < 0 ? "-" : "+") + ims + ")";
}

void print(const NodePtr& n, std::string& out) {
  switch (n->kind) {
    case NodeKind::Constant: out += fmt_const(n->value); break;
    case NodeKind::Variable: out += "z"; break;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul: {
      const char* op = n->kind == NodeKind::Add ? " + " : n->kind == NodeKind::Sub ? " - " : " * ";
      out += "(";
      print(n->lhs, out);
      out += op;
      print(n->rhs, out);
      out += ")";
      break;
    }
    case NodeKind::Neg:
      out += "(-";
      print(n->lhs, out);
      out += ")";
      break;
    case NodeKind::Pow:
      print(n->lhs, out);
      out += "^" + std::to_string(n->power);
      break;
    case NodeKind::Exp:
      out += "exp(";
      print(n->lhs, out);
      out += ")";
      break;
  }
}

// -------------------------------------------------------- classification

struct GaussForm {
  Polynomial poly;
  cplx c2{}, c1{}, c0{};
  bool pure_polynomial() const { return c2 == 0.0 && c1 == 0.0; }
};

std::optional<GaussForm> gauss_form(const NodePtr& n) {
  switch (n->kind) {
    case NodeKind::Constant: {
      GaussForm g;
      g.poly.coeffs = {n->value};
      g.poly.trim();
      return g;
    }
    case NodeKind::Variable: {
      GaussForm g;
      g.poly.coeffs = {0.0, 1.0};
      return g;
    }
    case NodeKind::Add:
    case NodeKind::Sub: {
      auto a = gauss_form(n->lhs);
      auto b = gauss_form(n->rhs);
      if (!a || !b) return std::nullopt;
      if (n->kind == NodeKind::Sub)
        for (auto& c : b->poly.coeffs) c = -c;
      if (a->poly.is_zero()) return b;
      if (b->poly.is_zero()) return a;
      if (a->c2 != b->c2 || a->c1 != b->c1) return std::nullopt;
      const cplx scale = std::exp(b->c0 - a->c0);
      for (auto& c : b->poly.coeffs) c *= scale;
      GaussForm g = *a;
      g.poly = a->poly + b->poly;
      if (g.poly.degree() > kMaxPolynomialDegree) return std::nullopt;
      return g;
    }
    case NodeKind::Mul: {
      auto a = gauss_form(n->lhs);
      auto b = gauss_form(n->rhs);
      if (!a || !b) return std::nullopt;
      if (a->poly.degree() + b->poly.degree() > kMaxPolynomialDegree) return std::nullopt;
      GaussForm g;
      g.poly = a->poly * b->poly;
      g.c2 = a->c2 + b->c2;
      g.c1 = a->c1 + b->c1;
      g.c0 = a->c0 + b->c0;
      return g;
    }
    case NodeKind::Neg: {
      auto a = gauss_form(n->lhs);
      if (!a) return std::nullopt;
      for (auto& c : a->poly.coeffs) c = -c;
      return a;
    }
    case NodeKind::Pow: {
      auto a = gauss_form(n->lhs);
      if (!a) return std::nullopt;
      if (static_cast<long>(std::max(a->poly.degree(), 0)) * n->power > kMaxPolynomialDegree)
        return std::nullopt;
      GaussForm g;
      g.poly.coeffs = {1.0};
      for (unsigned k = 0; k < n->power; ++k) g.poly = g.poly * a->poly;
      const double m = static_cast<double>(n->power);
      g.c2 = a->c2 * m;
      g.c1 = a->c1 * m;
      g.c0 = a->c0 * m;
      return g;
    }
    case NodeKind::Exp: {
      auto u = gauss_form(n->lhs);
      // only exp of a polynomial of degree <= 2 is normalized
      if (!u || !u->pure_polynomial()) return std::nullopt;
      Polynomial q = u->poly;
      const cplx s = std::exp(u->c0);
      for (auto& c : q.coeffs) c *= s;
      q.trim();
      if (q.degree() > 2) return std::nullopt;
      GaussForm g;
      g.poly.coeffs = {1.0};
      q.coeffs.resize(3, 0.0);
      g.c0 = q.coeffs[0];
      g.c1 = q.coeffs[1];
      g.c2 = q.coeffs[2];
      return g;
    }
  }
  return std::nullopt;
}

SymbolClass classify_node(const NodePtr& root) {
  SymbolClass cls;
  auto g = gauss_form(root);
  if (!g) return cls;
  if (g->poly.is_zero()) {
    cls.kind = SymbolKind::Zero;
    return cls;
  }
  if (g->pure_polynomial()) {
    cls.poly = g->poly;
    const cplx s = std::exp(g->c0);
    for (auto& c : cls.poly.coeffs) c *= s;
    cls.poly.trim();
    if (cls.poly.is_zero())
      cls.kind = SymbolKind::Zero;
    else if (cls.poly.degree() == 0)
      cls.kind = SymbolKind::Constant;
    else
      cls.kind = SymbolKind::Polynomial;
    return cls;
  }
  cls.kind = SymbolKind::GaussPoly;
  cls.poly = g->poly;
  cls.c2 = g->c2;
  cls.c1 = g->c1;
  cls.c0 = g->c0;
  return cls;
}

// --------------------------------------------------------- scaled values

using Scaled = ScaledValue;

Scaled scaled_exp(Scaled u) {
  const cplx v = u.m * std::exp(u.s);
  if (!std::isfinite(v.real())) {
    // exp of something enormous: only the real part matters for the modulus
    return {cplx{1.0, 0.0}, v.real()};
  }
  return {std::polar(1.0, v.imag()), v.real()};
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what), position_(position) {}

// ------------------------------------------------------------ Polynomial

cplx Polynomial::operator()(cplx z) const {
  cplx acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

void Polynomial::trim() {
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  r.coeffs.assign(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) r.coeffs[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) r.coeffs[i] += b.coeffs[i];
  r.trim();
  return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  if (a.is_zero() || b.is_zero()) return r;
  r.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  r.trim();
  return r;
}

const char* to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::Zero: return "zero";
    case SymbolKind::Constant: return "constant";
    case SymbolKind::Polynomial: return "polynomial";
    case SymbolKind::GaussPoly: return "gauss-poly";
    case SymbolKind::General: return "general";
  }
  return "general";
}

std::optional<int> SymbolClass::degree() const {
  switch (kind) {
    case SymbolKind::Zero:
    case SymbolKind::Constant: return 0;
    case SymbolKind::Polynomial: return poly.degree();
    default: return std::nullopt;
  }
}

bool SymbolClass::is_linear() const {
  auto d = degree();
  return d && *d <= 1;
}

cplx SymbolClass::evaluate(cplx z) const {
  switch (kind) {
    case SymbolKind::Zero: return 0.0;
    case SymbolKind::Constant:
    case SymbolKind::Polynomial: return poly(z);
    case SymbolKind::GaussPoly: return poly(z) * std::exp(c2 * z * z + c1 * z + c0);
    case SymbolKind::General: break;
  }
  throw std::logic_error("SymbolClass::evaluate on a general symbol");
}

// ----------------------------------------------------------- GrowthBound

double GrowthBound::log_at(double r) const {
  return log_scale + power * std::log1p(r) + quad * r * r + lin * r;
}

bool GrowthBound::is_zero() const { return std::isinf(log_scale) && log_scale < 0; }

GrowthBound operator*(const GrowthBound& a, const GrowthBound& b) {
  return {a.log_scale + b.log_scale, a.power + b.power, a.quad + b.quad, a.lin + b.lin};
}

std::optional<GrowthBound> growth_bound(const SymbolClass& cls) {
  GrowthBound g;
  switch (cls.kind) {
    case SymbolKind::Zero:
      g.log_scale = -std::numeric_limits<double>::infinity();
      return g;
    case SymbolKind::General: return std::nullopt;
    default: break;
  }
  // sum |p_k| r^k <= (sum |p_k|) (1+r)^d
  double mass = 0.0;
  for (const auto& c : cls.poly.coeffs) mass += std::abs(c);
  g.log_scale = std::log(mass);
  g.power = std::max(cls.poly.degree(), 0);
  if (cls.kind == SymbolKind::GaussPoly) {
    g.quad = std::abs(cls.c2);
    g.lin = std::abs(cls.c1);
    g.log_scale += cls.c0.real();
  }
  return g;
}

// ------------------------------------------------------------ EntireExpr

struct EntireExpr::Program {
  struct Instr {
    NodeKind kind;
    cplx value;
    unsigned power;
  };
  std::vector<Instr> code;
  std::size_t max_depth = 0;

  void emit(const NodePtr& n, std::size_t depth) {
    switch (n->kind) {
      case NodeKind::Constant:
      case NodeKind::Variable: break;
      case NodeKind::Neg:
      case NodeKind::Pow:
      case NodeKind::Exp: emit(n->lhs, depth); break;
      default:
        emit(n->lhs, depth);
        emit(n->rhs, depth + 1);
        break;
    }
    max_depth = std::max(max_depth, depth + 1);
    code.push_back({n->kind, n->value, n->power});
  }

  template <class T, class Ops>
  T run(cplx z, Ops ops) const {
    constexpr std::size_t kInline = 64;
    std::array<T, kInline> small;
    std::vector<T> big;
    T* st = small.data();
    if (max_depth > kInline) {
      big.resize(max_depth);
      st = big.data();
    }
    std::size_t sp = 0;
    for (const auto& ins : code) {
      switch (ins.kind) {
        case NodeKind::Constant: st[sp++] = ops.constant(ins.value); break;
        case NodeKind::Variable: st[sp++] = ops.constant(z); break;
        case NodeKind::Add: --sp; st[sp - 1] = ops.add(st[sp - 1], st[sp]); break;
        case NodeKind::Sub: --sp; st[sp - 1] = ops.sub(st[sp - 1], st[sp]); break;
        case NodeKind::Mul: --sp; st[sp - 1] = ops.mul(st[sp - 1], st[sp]); break;
        case NodeKind::Neg: st[sp - 1] = ops.neg(st[sp - 1]); break;
        case NodeKind::Pow: st[sp - 1] = ops.pow(st[sp - 1], ins.power); break;
        case NodeKind::Exp: st[sp - 1] = ops.exp(st[sp - 1]); break;
      }
    }
    return st[0];
  }
};

namespace {

struct PlainOps {
  cplx constant(cplx v) const { return v; }
  cplx add(cplx a, cplx b) const { return a + b; }
  cplx sub(cplx a, cplx b) const { return a - b; }
  cplx mul(cplx a, cplx b) const { return a * b; }
  cplx neg(cplx a) const { return -a; }
  cplx pow(cplx a, unsigned n) const { return ipow(a, n); }
  cplx exp(cplx a) const { return std::exp(a); }
};

struct ScaledOps {
  Scaled constant(cplx v) const { return normalize({v, 0.0}); }
  Scaled add(Scaled a, Scaled b) const { return scaled_add(a, b); }
  Scaled sub(Scaled a, Scaled b) const { return scaled_add(a, {-b.m, b.s}); }
  Scaled mul(Scaled a, Scaled b) const { return scaled_mul(a, b); }
  Scaled neg(Scaled a) const { return {-a.m, a.s}; }
  Scaled pow(Scaled a, unsigned n) const {
    Scaled acc{1.0, 0.0};
    for (unsigned i = 0; i < n; ++i) acc = scaled_mul(acc, a);
    return acc;
  }
  Scaled exp(Scaled a) const { return scaled_exp(a); }
};

}  // namespace

EntireExpr::EntireExpr() : EntireExpr(make_const(0.0)) {}

EntireExpr::EntireExpr(NodePtr root) : root_(std::move(root)) {
  auto prog = std::make_shared<Program>();
  prog->emit(root_, 0);
  program_ = std::move(prog);
  class_ = std::make_shared<SymbolClass>(classify_node(root_));
}

EntireExpr EntireExpr::constant(cplx value) { return EntireExpr(make_const(value)); }
EntireExpr EntireExpr::variable() { return EntireExpr(make_var()); }

cplx EntireExpr::operator()(cplx z) const { return program_->run<cplx>(z, PlainOps{}); }

double EntireExpr::log_abs(cplx z) const { return eval_scaled(z).log_abs(); }

ScaledValue EntireExpr::eval_scaled(cplx z) const { return program_->run<Scaled>(z, ScaledOps{}); }

std::optional<GrowthBound> EntireExpr::growth() const { return growth_bound(*class_); }

std::string EntireExpr::to_string() const {
  std::string out;
  print(root_, out);
  return out;
}

EntireExpr operator+(const EntireExpr& a, const EntireExpr& b) {
  return EntireExpr(make_add(a.root(), b.root()));
}
EntireExpr operator-(const EntireExpr& a, const EntireExpr& b) {
  return EntireExpr(make_sub(a.root(), b.root()));
}
EntireExpr operator*(const EntireExpr& a, const EntireExpr& b) {
  return EntireExpr(make_mul(a.root(), b.root()));
}
EntireExpr operator-(const EntireExpr& a) { return EntireExpr(make_neg(a.root())); }
EntireExpr pow(const EntireExpr& a, unsigned n) { return EntireExpr(make_pow(a.root(), n)); }
EntireExpr exp(const EntireExpr& a) { return EntireExpr(make_exp(a.root())); }

EntireExpr parse_symbol(std::string_view text) { return EntireExpr(Parser(text).parse()); }

namespace {

NodePtr derive(const NodePtr& n) {
  switch (n->kind) {
    case NodeKind::Constant: return make_const(0.0);
    case NodeKind::Variable: return make_const(1.0);
    case NodeKind::Add: return make_add(derive(n->lhs), derive(n->rhs));
    case NodeKind::Sub: return make_sub(derive(n->lhs), derive(n->rhs));
    case NodeKind::Mul:
      return make_add(make_mul(derive(n->lhs), n->rhs), make_mul(n->lhs, derive(n->rhs)));
    case NodeKind::Neg: return make_neg(derive(n->lhs));
    case NodeKind::Pow:
      return make_mul(make_mul(make_const(static_cast<double>(n->power)), make_pow(n->lhs, n->power - 1)),
                      derive(n->lhs));
    case NodeKind::Exp: return make_mul(derive(n->lhs), n);
  }
  return make_const(0.0);
}

NodePtr substitute(const NodePtr& n, const NodePtr& g) {
  switch (n->kind) {
    case NodeKind::Constant: return n;
    case NodeKind::Variable: return g;
    case NodeKind::Add: return make_add(substitute(n->lhs, g), substitute(n->rhs, g));
    case NodeKind::Sub: return make_sub(substitute(n->lhs, g), substitute(n->rhs, g));
    case NodeKind::Mul: return make_mul(substitute(n->lhs, g), substitute(n->rhs, g));
    case NodeKind::Neg: return make_neg(substitute(n->lhs, g));
    case NodeKind::Pow: return make_pow(substitute(n->lhs, g), n->power);
    case NodeKind::Exp: return make_exp(substitute(n->lhs, g));
  }
  return n;
}

}  // namespace

EntireExpr differentiate(const EntireExpr& f) { return EntireExpr(derive(f.root())); }

EntireExpr compose(const EntireExpr& f, const EntireExpr& g) {
  return EntireExpr(substitute(f.root(), g.root()));
}

SymbolClass classify(const EntireExpr& f) { return f.symbol_class(); }

}  // namespace fockbench
