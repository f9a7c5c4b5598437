#pragma once

// Closed-form expressions of one real variable `x`.
//
// Grammar:
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := base ("^" factor)?
//   base   := NUMBER | "x" | FUNC "(" expr ")" | "(" expr ")" | "-" factor
//   FUNC   := exp | ln | sin | cos | sqrt | abs
//   NUMBER := integer | decimal | integer "/" integer
//
// Nodes are stored in post-order, so every child index is smaller than its
// parent's and the root is the last node. Evaluation is a single forward sweep.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "folcc/jet.hpp"
#include "folcc/scalar.hpp"

namespace folcc {

enum class Op : std::uint8_t { constant, var, neg, exp, ln, sin, cos, sqrt, abs, add, sub, mul, div, pow };

struct ExprNode {
  Op op = Op::constant;
  int lhs = -1;
  int rhs = -1;
  Rational value;      // constant nodes only
  double dvalue = 0.0;  // cached double of `value`
};

struct EvalOptions {
  /// Divisors (and abs/sqrt arguments under differentiation) closer than this
  /// to zero raise DomainError. Exact arithmetic tests against zero exactly.
  double zero_tol = 1e-12;
};

class ExprAst {
 public:
  ExprAst();  // the constant 0

  static ExprAst parse(std::string_view source);
  static ExprAst constant(const Rational& v);
  static ExprAst variable();
  /// Validates child indices (children precede parents).
  static ExprAst from_postorder(std::vector<ExprNode> nodes);

  // Structural builders (no simplification beyond constant folding in derivative()).
  friend ExprAst operator+(const ExprAst& a, const ExprAst& b);
  friend ExprAst operator-(const ExprAst& a, const ExprAst& b);
  friend ExprAst operator*(const ExprAst& a, const ExprAst& b);
  friend ExprAst operator/(const ExprAst& a, const ExprAst& b);
  friend ExprAst operator-(const ExprAst& a);
  static ExprAst apply(Op fn, const ExprAst& arg);
  static ExprAst power(const ExprAst& base, const ExprAst& exponent);

  /// g∘h: every occurrence of x in `outer` replaced by `inner`.
  static ExprAst compose(const ExprAst& outer, const ExprAst& inner);

  /// Symbolic d/dx.
  ExprAst derivative() const;

  std::string to_string() const;
  const std::vector<ExprNode>& nodes() const { return *nodes_; }
  int root() const { return static_cast<int>(nodes_->size()) - 1; }

  /// Polynomial in x (integer powers ≥ 0, + − ×, constant divisors).
  bool is_polynomial() const;
  /// Rational function of x (only field operations and integer powers).
  bool is_rational_function() const;
  bool is_constant() const;
  /// Structurally the bare variable.
  bool is_identity() const;

  double eval(double x, const EvalOptions& opt = {}) const;

  template <class T>
  T eval_as(const T& x, const EvalOptions& opt = {}) const;

  template <class T>
  Jet<T> eval_jet(const Jet<T>& input, const EvalOptions& opt = {}) const;

  friend bool operator==(const ExprAst& a, const ExprAst& b);

 private:
  explicit ExprAst(std::vector<ExprNode> nodes);
  std::shared_ptr<const std::vector<ExprNode>> nodes_;
};

}  // namespace folcc
