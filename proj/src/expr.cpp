#include "hcn/expr.hpp"

#include "hcn/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace hcn {

namespace {

std::shared_ptr<const ExprNode> make_node(ExprNode n) {
  return std::make_shared<const ExprNode>(std::move(n));
}

} // namespace

Expr::Expr() : Expr(0.0) {}

Expr::Expr(double literal)
    : node_(make_node(ExprNode{ExprOp::Const, literal, 0, Expr(Leaf{}), Expr(Leaf{})})) {}

Expr Expr::variable(int index) {
  if (index < 0) throw StructuralError("negative coordinate index");
  return Expr(Leaf{}, make_node(ExprNode{ExprOp::Var, 0.0, index, Expr(Leaf{}), Expr(Leaf{})}));
}

Expr Expr::raw_unary(ExprOp op, Expr a) {
  return Expr(Leaf{}, make_node(ExprNode{op, 0.0, 0, std::move(a), Expr(Leaf{})}));
}

Expr Expr::raw_binary(ExprOp op, Expr a, Expr b) {
  return Expr(Leaf{}, make_node(ExprNode{op, 0.0, 0, std::move(a), std::move(b)}));
}

Expr Expr::raw_pow(Expr base, int exponent) {
  return Expr(Leaf{}, make_node(ExprNode{ExprOp::Pow, 0.0, exponent, std::move(base), Expr(Leaf{})}));
}

ExprOp Expr::op() const { return node_->op; }
double Expr::literal() const { return node_->literal; }
int Expr::var_index() const { return node_->index; }
int Expr::exponent() const { return node_->index; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }

namespace {

int arity_of(const Expr& e, std::unordered_map<const ExprNode*, int>& memo) {
  switch (e.op()) {
  case ExprOp::Const:
    return 0;
  case ExprOp::Var:
    return e.var_index() + 1;
  default:
    break;
  }
  if (auto it = memo.find(e.node()); it != memo.end()) return it->second;
  int r = arity_of(e.lhs(), memo);
  switch (e.op()) {
  case ExprOp::Add:
  case ExprOp::Sub:
  case ExprOp::Mul:
  case ExprOp::Div:
    r = std::max(r, arity_of(e.rhs(), memo));
    break;
  default:
    break;
  }
  memo.emplace(e.node(), r);
  return r;
}

} // namespace

int Expr::arity() const {
  std::unordered_map<const ExprNode*, int> memo;
  return arity_of(*this, memo);
}

// ---------------------------------------------------------------------------
// Folding constructors

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.literal() + b.literal());
  if (a.is_literal(0.0)) return b;
  if (b.is_literal(0.0)) return a;
  return Expr::raw_binary(ExprOp::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.literal() - b.literal());
  if (b.is_literal(0.0)) return a;
  if (a.is_literal(0.0)) return -b;
  return Expr::raw_binary(ExprOp::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.literal() * b.literal());
  if (a.is_literal(0.0) || b.is_literal(0.0)) return Expr(0.0);
  if (a.is_literal(1.0)) return b;
  if (b.is_literal(1.0)) return a;
  if (a.is_literal(-1.0)) return -b;
  if (b.is_literal(-1.0)) return -a;
  return Expr::raw_binary(ExprOp::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.literal() != 0.0) {
    return Expr(a.literal() / b.literal());
  }
  if (a.is_literal(0.0) && !b.is_literal(0.0)) return Expr(0.0);
  if (b.is_literal(1.0)) return a;
  return Expr::raw_binary(ExprOp::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr(-a.literal());
  if (a.op() == ExprOp::Neg) return a.lhs();
  return Expr::raw_unary(ExprOp::Neg, a);
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0) return Expr(1.0);
  if (exponent == 1) return base;
  if (base.is_constant() && (base.literal() != 0.0 || exponent > 0)) {
    return Expr(std::pow(base.literal(), exponent));
  }
  return Expr::raw_pow(base, exponent);
}

namespace {

Expr fold_func(ExprOp op, const Expr& a) {
  if (a.is_constant()) {
    const double x = a.literal();
    switch (op) {
    case ExprOp::Exp:
      return Expr(std::exp(x));
    case ExprOp::Ln:
      if (x > 0.0) return Expr(std::log(x));
      break;
    case ExprOp::Sin:
      return Expr(std::sin(x));
    case ExprOp::Cos:
      return Expr(std::cos(x));
    case ExprOp::Sqrt:
      if (x >= 0.0) return Expr(std::sqrt(x));
      break;
    default:
      break;
    }
  }
  return Expr::raw_unary(op, a);
}

} // namespace

Expr exp(const Expr& a) { return fold_func(ExprOp::Exp, a); }
Expr ln(const Expr& a) { return fold_func(ExprOp::Ln, a); }
Expr sin(const Expr& a) { return fold_func(ExprOp::Sin, a); }
Expr cos(const Expr& a) { return fold_func(ExprOp::Cos, a); }
Expr sqrt(const Expr& a) { return fold_func(ExprOp::Sqrt, a); }

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (accept('+')) {
        e = Expr::raw_binary(ExprOp::Add, e, parse_term());
      } else if (accept('-')) {
        e = Expr::raw_binary(ExprOp::Sub, e, parse_term());
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      if (accept('*')) {
        e = Expr::raw_binary(ExprOp::Mul, e, parse_unary());
      } else if (accept('/')) {
        e = Expr::raw_binary(ExprOp::Div, e, parse_unary());
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) {
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        // Negative literal, unless an exponent binds to it.
        std::size_t save = pos_;
        double v = parse_number();
        if (peek() != '^') return Expr(-v);
        pos_ = save;
      }
      return Expr::raw_unary(ExprOp::Neg, parse_unary());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) {
      skip_space();
      std::size_t at = pos_;
      bool negative = accept('-');
      skip_space();
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail_at("exponent must be an integer literal", at);
      }
      long k = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        k = k * 10 + (text_[pos_] - '0');
        if (k > 1000000) fail_at("exponent too large", at);
        ++pos_;
      }
      if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
        fail_at("exponent must be an integer literal", at);
      }
      if (peek() == '^') fail("chained exponents are not supported; use parentheses");
      return Expr::raw_pow(base, static_cast<int>(negative ? -k : k));
    }
    return base;
  }

  double parse_number() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    std::string token(text_.substr(start, pos_ - start));
    if (token.empty() || token == ".") fail_at("malformed number", start);
    char* end = nullptr;
    double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) fail_at("malformed number", start);
    return v;
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr(parse_number());
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view name = text_.substr(start, pos_ - start);
      if (name.size() >= 2 && name[0] == 'x' &&
          name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
        if (name[1] == '0' && name.size() > 2) fail_at("malformed coordinate identifier", start);
        long k = std::strtol(std::string(name.substr(1)).c_str(), nullptr, 10);
        if (k < 1 || k > dim_) fail_at("coordinate out of range: " + std::string(name), start);
        return Expr::variable(static_cast<int>(k - 1));
      }
      ExprOp op;
      if (name == "exp") {
        op = ExprOp::Exp;
      } else if (name == "ln") {
        op = ExprOp::Ln;
      } else if (name == "sin") {
        op = ExprOp::Sin;
      } else if (name == "cos") {
        op = ExprOp::Cos;
      } else if (name == "sqrt") {
        op = ExprOp::Sqrt;
      } else {
        fail_at("unknown identifier '" + std::string(name) + "'", start);
      }
      if (!accept('(')) fail("expected '(' after function name");
      Expr arg = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return Expr::raw_unary(op, arg);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

const char* func_name(ExprOp op) {
  switch (op) {
  case ExprOp::Exp:
    return "exp";
  case ExprOp::Ln:
    return "ln";
  case ExprOp::Sin:
    return "sin";
  case ExprOp::Cos:
    return "cos";
  case ExprOp::Sqrt:
    return "sqrt";
  default:
    return "?";
  }
}

void print_to(const Expr& e, std::string& out) {
  switch (e.op()) {
  case ExprOp::Const: {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", std::fabs(e.literal()));
    if (std::signbit(e.literal())) {
      out += "(-";
      out += buf;
      out += ')';
    } else {
      out += buf;
    }
    return;
  }
  case ExprOp::Var:
    out += 'x';
    out += std::to_string(e.var_index() + 1);
    return;
  case ExprOp::Neg:
    out += "(-(";
    print_to(e.lhs(), out);
    out += "))";
    return;
  case ExprOp::Add:
  case ExprOp::Sub:
  case ExprOp::Mul:
  case ExprOp::Div: {
    const char sym = e.op() == ExprOp::Add   ? '+'
                     : e.op() == ExprOp::Sub ? '-'
                     : e.op() == ExprOp::Mul ? '*'
                                             : '/';
    out += '(';
    print_to(e.lhs(), out);
    out += ' ';
    out += sym;
    out += ' ';
    print_to(e.rhs(), out);
    out += ')';
    return;
  }
  case ExprOp::Pow:
    out += '(';
    print_to(e.lhs(), out);
    out += " ^ ";
    out += std::to_string(e.exponent());
    out += ')';
    return;
  default:
    out += func_name(e.op());
    out += '(';
    print_to(e.lhs(), out);
    out += ')';
    return;
  }
}

} // namespace

Expr parse(std::string_view text, int dim) {
  if (dim < 1) throw StructuralError("chart dimension must be positive");
  return Parser(text, dim).parse_all();
}

std::string print(const Expr& e) {
  std::string out;
  print_to(e, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
  case ExprOp::Const:
    return a.literal() == b.literal() && std::signbit(a.literal()) == std::signbit(b.literal());
  case ExprOp::Var:
    return a.var_index() == b.var_index();
  case ExprOp::Pow:
    return a.exponent() == b.exponent() && structurally_equal(a.lhs(), b.lhs());
  case ExprOp::Add:
  case ExprOp::Sub:
  case ExprOp::Mul:
  case ExprOp::Div:
    return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
  default:
    return structurally_equal(a.lhs(), b.lhs());
  }
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

using ExprMemo = std::unordered_map<const ExprNode*, Expr>;

Expr diff(const Expr& e, int k, ExprMemo& memo) {
  if (auto it = memo.find(e.node()); it != memo.end()) return it->second;
  Expr d;
  switch (e.op()) {
  case ExprOp::Const:
    d = Expr(0.0);
    break;
  case ExprOp::Var:
    d = Expr(e.var_index() == k ? 1.0 : 0.0);
    break;
  case ExprOp::Neg:
    d = -diff(e.lhs(), k, memo);
    break;
  case ExprOp::Add:
    d = diff(e.lhs(), k, memo) + diff(e.rhs(), k, memo);
    break;
  case ExprOp::Sub:
    d = diff(e.lhs(), k, memo) - diff(e.rhs(), k, memo);
    break;
  case ExprOp::Mul:
    d = diff(e.lhs(), k, memo) * e.rhs() + e.lhs() * diff(e.rhs(), k, memo);
    break;
  case ExprOp::Div: {
    Expr da = diff(e.lhs(), k, memo);
    Expr db = diff(e.rhs(), k, memo);
    d = da / e.rhs() - (e.lhs() * db) / pow(e.rhs(), 2);
    break;
  }
  case ExprOp::Pow: {
    const int n = e.exponent();
    d = Expr(static_cast<double>(n)) * pow(e.lhs(), n - 1) * diff(e.lhs(), k, memo);
    break;
  }
  case ExprOp::Exp:
    d = e * diff(e.lhs(), k, memo);
    break;
  case ExprOp::Ln:
    d = diff(e.lhs(), k, memo) / e.lhs();
    break;
  case ExprOp::Sin:
    d = cos(e.lhs()) * diff(e.lhs(), k, memo);
    break;
  case ExprOp::Cos:
    d = -(sin(e.lhs()) * diff(e.lhs(), k, memo));
    break;
  case ExprOp::Sqrt:
    d = diff(e.lhs(), k, memo) / (Expr(2.0) * e);
    break;
  }
  memo.emplace(e.node(), d);
  return d;
}

} // namespace

Expr differentiate(const Expr& e, int k) {
  if (k < 0) throw StructuralError("negative coordinate index");
  ExprMemo memo;
  return diff(e, k, memo);
}

// ---------------------------------------------------------------------------
// Evaluation

Jet evaluate(const Expr& e, std::span<const Jet> env, JetMemo& memo) {
  if (env.empty()) throw StructuralError("evaluation environment is empty");
  if (auto it = memo.find(e.node()); it != memo.end()) return it->second;
  Jet r;
  switch (e.op()) {
  case ExprOp::Const:
    r = Jet::constant_like(env[0], e.literal());
    break;
  case ExprOp::Var:
    if (e.var_index() >= static_cast<int>(env.size())) {
      throw StructuralError("expression references x" + std::to_string(e.var_index() + 1) +
                            " beyond environment of size " + std::to_string(env.size()));
    }
    r = env[e.var_index()];
    break;
  case ExprOp::Neg:
    r = -evaluate(e.lhs(), env, memo);
    break;
  case ExprOp::Add:
    r = evaluate(e.lhs(), env, memo) + evaluate(e.rhs(), env, memo);
    break;
  case ExprOp::Sub:
    r = evaluate(e.lhs(), env, memo) - evaluate(e.rhs(), env, memo);
    break;
  case ExprOp::Mul:
    r = evaluate(e.lhs(), env, memo) * evaluate(e.rhs(), env, memo);
    break;
  case ExprOp::Div:
    r = evaluate(e.lhs(), env, memo) / evaluate(e.rhs(), env, memo);
    break;
  case ExprOp::Pow:
    r = powi(evaluate(e.lhs(), env, memo), e.exponent());
    break;
  case ExprOp::Exp:
    r = exp(evaluate(e.lhs(), env, memo));
    break;
  case ExprOp::Ln:
    r = log(evaluate(e.lhs(), env, memo));
    break;
  case ExprOp::Sin:
    r = sin(evaluate(e.lhs(), env, memo));
    break;
  case ExprOp::Cos:
    r = cos(evaluate(e.lhs(), env, memo));
    break;
  case ExprOp::Sqrt:
    r = sqrt(evaluate(e.lhs(), env, memo));
    break;
  }
  memo.emplace(e.node(), r);
  return r;
}

Jet evaluate(const Expr& e, std::span<const Jet> env) {
  JetMemo memo;
  return evaluate(e, env, memo);
}

namespace {

using ScalarMemo = std::unordered_map<const ExprNode*, double>;

double eval_scalar(const Expr& e, std::span<const double> point, ScalarMemo& memo);

double eval_node(const Expr& e, std::span<const double> point, ScalarMemo& memo) {
  switch (e.op()) {
  case ExprOp::Const:
    return e.literal();
  case ExprOp::Var:
    if (e.var_index() >= static_cast<int>(point.size())) {
      throw StructuralError("expression references a coordinate beyond the point");
    }
    return point[e.var_index()];
  case ExprOp::Neg:
    return -eval_scalar(e.lhs(), point, memo);
  case ExprOp::Add:
    return eval_scalar(e.lhs(), point, memo) + eval_scalar(e.rhs(), point, memo);
  case ExprOp::Sub:
    return eval_scalar(e.lhs(), point, memo) - eval_scalar(e.rhs(), point, memo);
  case ExprOp::Mul:
    return eval_scalar(e.lhs(), point, memo) * eval_scalar(e.rhs(), point, memo);
  case ExprOp::Div: {
    double den = eval_scalar(e.rhs(), point, memo);
    if (den == 0.0) throw SingularityError("division by zero");
    return eval_scalar(e.lhs(), point, memo) / den;
  }
  case ExprOp::Pow:
    return std::pow(eval_scalar(e.lhs(), point, memo), e.exponent());
  case ExprOp::Exp:
    return std::exp(eval_scalar(e.lhs(), point, memo));
  case ExprOp::Ln: {
    double x = eval_scalar(e.lhs(), point, memo);
    if (!(x > 0.0)) throw SingularityError("ln of nonpositive value");
    return std::log(x);
  }
  case ExprOp::Sin:
    return std::sin(eval_scalar(e.lhs(), point, memo));
  case ExprOp::Cos:
    return std::cos(eval_scalar(e.lhs(), point, memo));
  case ExprOp::Sqrt: {
    double x = eval_scalar(e.lhs(), point, memo);
    if (x < 0.0) throw SingularityError("sqrt of negative value");
    return std::sqrt(x);
  }
  }
  return 0.0;
}

double eval_scalar(const Expr& e, std::span<const double> point, ScalarMemo& memo) {
  if (e.op() == ExprOp::Const || e.op() == ExprOp::Var) return eval_node(e, point, memo);
  if (auto it = memo.find(e.node()); it != memo.end()) return it->second;
  const double v = eval_node(e, point, memo);
  memo.emplace(e.node(), v);
  return v;
}

} // namespace

double evaluate(const Expr& e, std::span<const double> point) {
  ScalarMemo memo;
  return eval_scalar(e, point, memo);
}

} // namespace hcn
