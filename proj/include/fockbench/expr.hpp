#pragma once

// Entire-function symbols: parsing, evaluation, symbolic derivative,
// composition and structural classification.
//
// Grammar (whitespace insensitive):
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' UINT)*
//   primary := NUMBER | NUMBER 'i' | 'i' | 'z' | 'exp' '(' expr ')' | '(' expr ')'
//
// There is no division, conjugation or modulus, so every expression is entire.

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fockbench {

using cplx = std::complex<double>;

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

enum class NodeKind { Constant, Variable, Add, Sub, Mul, Neg, Pow, Exp };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  cplx value{};      // Constant
  unsigned power{};  // Pow
  NodePtr lhs;       // unary operand or left operand
  NodePtr rhs;
};

/// Dense polynomial, coefficients in increasing degree. Empty means zero.
struct Polynomial {
  std::vector<cplx> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.empty(); }
  cplx operator()(cplx z) const;
  void trim();
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);

enum class SymbolKind { Zero, Constant, Polynomial, GaussPoly, General };

const char* to_string(SymbolKind kind);

/// Most specific recognized form.
///   Zero/Constant/Polynomial: `poly` holds the expanded coefficients.
///   GaussPoly: value = poly(z) * exp(c2 z^2 + c1 z + c0), with (c2, c1) != 0.
struct SymbolClass {
  SymbolKind kind = SymbolKind::General;
  Polynomial poly;
  cplx c2{}, c1{}, c0{};

  std::optional<int> degree() const;
  bool is_linear() const;  // polynomial of degree <= 1 (constants included)
  cplx evaluate(cplx z) const;
};

/// |f(z)| <= exp(log_scale) (1+|z|)^power exp(quad |z|^2 + lin |z|) for all z.
/// log_scale = -inf encodes f == 0.
struct GrowthBound {
  double log_scale = 0.0;
  double power = 0.0;
  double quad = 0.0;
  double lin = 0.0;

  double log_at(double r) const;
  bool is_zero() const;
};

GrowthBound operator*(const GrowthBound& a, const GrowthBound& b);

/// value = m * exp(s); |m| is kept within [1e-100, 1e100] so huge moduli stay finite.
struct ScaledValue {
  cplx m{};
  double s = 0.0;

  double log_abs() const;
};

ScaledValue normalize(ScaledValue x);
ScaledValue scaled_add(ScaledValue a, ScaledValue b);
ScaledValue scaled_mul(ScaledValue a, ScaledValue b);

class EntireExpr {
public:
  EntireExpr();  // the zero function
  explicit EntireExpr(NodePtr root);

  static EntireExpr constant(cplx value);
  static EntireExpr variable();

  cplx operator()(cplx z) const;
  /// log|f(z)| evaluated with a scaled representation, so exp(z^2) at |z| = 100
  /// does not overflow. Returns -inf at zeros.
  double log_abs(cplx z) const;
  ScaledValue eval_scaled(cplx z) const;

  const NodePtr& root() const { return root_; }
  const SymbolClass& symbol_class() const { return *class_; }
  std::optional<int> degree() const { return class_->degree(); }
  std::optional<GrowthBound> growth() const;

  /// Canonical text; reparses to an expression with bitwise identical values.
  std::string to_string() const;

private:
  struct Program;
  NodePtr root_;
  std::shared_ptr<const Program> program_;
  std::shared_ptr<const SymbolClass> class_;
};

EntireExpr operator+(const EntireExpr& a, const EntireExpr& b);
EntireExpr operator-(const EntireExpr& a, const EntireExpr& b);
EntireExpr operator*(const EntireExpr& a, const EntireExpr& b);
EntireExpr operator-(const EntireExpr& a);
EntireExpr pow(const EntireExpr& a, unsigned n);
EntireExpr exp(const EntireExpr& a);

EntireExpr parse_symbol(std::string_view text);
EntireExpr differentiate(const EntireExpr& f);
/// (f o g)(z) = f(g(z)).
EntireExpr compose(const EntireExpr& f, const EntireExpr& g);
SymbolClass classify(const EntireExpr& f);
std::optional<GrowthBound> growth_bound(const SymbolClass& cls);

}  // namespace fockbench
