#pragma once

// Expression language for chart component functions.
//
// Grammar (whitespace insignificant):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] integer)?
//   primary := number | 'x' integer | func '(' expr ')' | '(' expr ')'
//   func    := 'exp' | 'ln' | 'sin' | 'cos' | 'sqrt'
// A '-' directly followed by a number literal yields a negative literal.

#include "hcn/jet.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

namespace hcn {

enum class ExprOp { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Exp, Ln, Sin, Cos, Sqrt };

struct ExprNode;

/// Immutable expression handle; subtrees may be shared.
class Expr {
public:
  /// Literal 0.
  Expr();
  explicit Expr(double literal);

  static Expr constant(double value) { return Expr(value); }
  /// Coordinate x_{index + 1} (index is 0-based).
  static Expr variable(int index);

  // Raw constructors: build exactly the requested node.
  static Expr raw_unary(ExprOp op, Expr a);
  static Expr raw_binary(ExprOp op, Expr a, Expr b);
  static Expr raw_pow(Expr base, int exponent);

  ExprOp op() const;
  double literal() const;
  int var_index() const;
  int exponent() const;
  const Expr& lhs() const;
  const Expr& rhs() const;

  bool is_constant() const { return op() == ExprOp::Const; }
  bool is_literal(double v) const { return is_constant() && literal() == v; }
  const ExprNode* node() const noexcept { return node_.get(); }

  /// Highest coordinate index referenced plus one (0 for constant expressions).
  int arity() const;

private:
  struct Leaf {};
  // Empty child slot of a leaf node.
  explicit Expr(Leaf) {}
  Expr(Leaf, std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  ExprOp op;
  double literal = 0.0;
  int index = 0; // variable index or integer exponent
  Expr a, b;
};

// Folding constructors: literal-literal arithmetic is evaluated, and the
// identities 0 + e, e * 1, 0 * e, e ^ 1, e ^ 0 are collapsed.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, int exponent);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr sqrt(const Expr& a);

/// Parse `text` for a chart of dimension `dim`; identifiers x1..x<dim>.
Expr parse(std::string_view text, int dim);

/// Fully parenthesized form; parse(print(e)) == e structurally.
std::string print(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// Exact symbolic d/dx_{k+1} (k is 0-based).
Expr differentiate(const Expr& e, int k);

/// Memo table for evaluating many expressions that share subtrees.
using JetMemo = std::unordered_map<const ExprNode*, Jet>;

/// Structural evaluation over jets. env[k] is the jet of coordinate x_{k+1}.
Jet evaluate(const Expr& e, std::span<const Jet> env);
Jet evaluate(const Expr& e, std::span<const Jet> env, JetMemo& memo);

/// Plain double evaluation.
double evaluate(const Expr& e, std::span<const double> point);

} // namespace hcn
