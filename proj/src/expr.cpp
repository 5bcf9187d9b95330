#include "hydrolax/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>

namespace hydrolax {

Complex principal_sqrt(Complex z) {
  if (z.imag() == 0.0) z = Complex(z.real(), +0.0);
  return std::sqrt(z);
}

Complex principal_pow(Complex z, long long num, long long den) {
  if (den == 1) {
    if (num == 0) return Complex(1.0, 0.0);
    const bool invert = num < 0;
    if (invert && z == Complex(0.0, 0.0))
      throw DivisionByZero("0 raised to a negative power");
    unsigned long long e =
        invert ? static_cast<unsigned long long>(-(num + 1)) + 1ull
               : static_cast<unsigned long long>(num);
    Complex base = z;
    Complex acc(1.0, 0.0);
    while (e != 0) {
      if (e & 1ull) acc *= base;
      base *= base;
      e >>= 1;
    }
    return invert ? Complex(1.0, 0.0) / acc : acc;
  }
  if (z == Complex(0.0, 0.0)) {
    if (num > 0) return Complex(0.0, 0.0);
    if (num == 0) return Complex(1.0, 0.0);
    throw DivisionByZero("0 raised to a negative power");
  }
  if (num == 1 && den == 2) return principal_sqrt(z);
  if (z.imag() == 0.0) z = Complex(z.real(), +0.0);
  return std::pow(z, static_cast<double>(num) / static_cast<double>(den));
}

struct ExprNode {
  ExprOp op;
  Complex value{};              // Constant
  int var = 0;                  // Variable
  long long pnum = 1, pden = 1; // Pow exponent
  std::shared_ptr<const ExprNode> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_constant(Complex v) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::Constant;
  n->value = v;
  return n;
}

bool is_const(const NodePtr& n, Complex v) {
  return n->op == ExprOp::Constant && n->value == v;
}

NodePtr make_unary(ExprOp op, const NodePtr& a) {
  if (a->op == ExprOp::Constant) {
    switch (op) {
      case ExprOp::Neg: return make_constant(-a->value);
      case ExprOp::Sqrt: return make_constant(principal_sqrt(a->value));
      case ExprOp::Sin: return make_constant(std::sin(a->value));
      case ExprOp::Cos: return make_constant(std::cos(a->value));
      case ExprOp::Exp: return make_constant(std::exp(a->value));
      default: break;
    }
  }
  if (op == ExprOp::Neg && a->op == ExprOp::Neg) return a->a;
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = a;
  return n;
}

NodePtr make_binary(ExprOp op, const NodePtr& a, const NodePtr& b) {
  const bool ac = a->op == ExprOp::Constant;
  const bool bc = b->op == ExprOp::Constant;
  const Complex zero(0.0, 0.0);
  const Complex one(1.0, 0.0);
  switch (op) {
    case ExprOp::Add:
      if (ac && bc) return make_constant(a->value + b->value);
      if (is_const(a, zero)) return b;
      if (is_const(b, zero)) return a;
      break;
    case ExprOp::Sub:
      if (ac && bc) return make_constant(a->value - b->value);
      if (is_const(b, zero)) return a;
      if (is_const(a, zero)) return make_unary(ExprOp::Neg, b);
      break;
    case ExprOp::Mul:
      if (ac && bc) return make_constant(a->value * b->value);
      if (is_const(a, zero) || is_const(b, zero)) return make_constant(zero);
      if (is_const(a, one)) return b;
      if (is_const(b, one)) return a;
      break;
    case ExprOp::Div:
      // 0/e folds to 0 so that derivatives of constants stay exact zeros.
      if (is_const(a, zero)) return make_constant(zero);
      if (is_const(b, one)) return a;
      if (ac && bc && b->value != zero) return make_constant(a->value / b->value);
      break;
    default: break;
  }
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = a;
  n->b = b;
  return n;
}

NodePtr make_pow(const NodePtr& base, long long num, long long den) {
  if (den == 0) throw ConfigError("rational exponent with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) return make_constant(Complex(1.0, 0.0));
  if (num == 1 && den == 1) return base;
  if (base->op == ExprOp::Constant)
    return make_constant(principal_pow(base->value, num, den));
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::Pow;
  n->a = base;
  n->pnum = num;
  n->pden = den;
  return n;
}

Complex eval_node(const ExprNode* n, std::span<const Complex> coords,
                  const std::optional<Complex>& lambda) {
  switch (n->op) {
    case ExprOp::Constant: return n->value;
    case ExprOp::Variable:
      if (n->var == kLambdaVar) {
        if (!lambda) throw UnboundVariable("lambda is unbound");
        return *lambda;
      }
      if (static_cast<size_t>(n->var) >= coords.size())
        throw UnboundVariable("u" + std::to_string(n->var + 1) + " is unbound");
      return coords[static_cast<size_t>(n->var)];
    case ExprOp::Neg: return -eval_node(n->a.get(), coords, lambda);
    case ExprOp::Sqrt: return principal_sqrt(eval_node(n->a.get(), coords, lambda));
    case ExprOp::Sin: return std::sin(eval_node(n->a.get(), coords, lambda));
    case ExprOp::Cos: return std::cos(eval_node(n->a.get(), coords, lambda));
    case ExprOp::Exp: return std::exp(eval_node(n->a.get(), coords, lambda));
    case ExprOp::Add:
      return eval_node(n->a.get(), coords, lambda) + eval_node(n->b.get(), coords, lambda);
    case ExprOp::Sub:
      return eval_node(n->a.get(), coords, lambda) - eval_node(n->b.get(), coords, lambda);
    case ExprOp::Mul:
      return eval_node(n->a.get(), coords, lambda) * eval_node(n->b.get(), coords, lambda);
    case ExprOp::Div: {
      const Complex d = eval_node(n->b.get(), coords, lambda);
      if (d == Complex(0.0, 0.0)) throw DivisionByZero("division by zero");
      return eval_node(n->a.get(), coords, lambda) / d;
    }
    case ExprOp::Pow:
      return principal_pow(eval_node(n->a.get(), coords, lambda), n->pnum, n->pden);
  }
  throw Error("corrupt expression node");
}

NodePtr diff_node(const NodePtr& n, int var);

NodePtr diff_children_product(const NodePtr& outer_derivative, const NodePtr& inner,
                              int var) {
  return make_binary(ExprOp::Mul, outer_derivative, diff_node(inner, var));
}

NodePtr diff_node(const NodePtr& n, int var) {
  const Complex zero(0.0, 0.0);
  switch (n->op) {
    case ExprOp::Constant: return make_constant(zero);
    case ExprOp::Variable:
      return make_constant(n->var == var ? Complex(1.0, 0.0) : zero);
    case ExprOp::Neg: return make_unary(ExprOp::Neg, diff_node(n->a, var));
    case ExprOp::Sqrt:
      // a' / (2 sqrt(a))
      return make_binary(ExprOp::Div, diff_node(n->a, var),
                         make_binary(ExprOp::Mul, make_constant({2.0, 0.0}),
                                     make_unary(ExprOp::Sqrt, n->a)));
    case ExprOp::Sin:
      return diff_children_product(make_unary(ExprOp::Cos, n->a), n->a, var);
    case ExprOp::Cos:
      return make_unary(ExprOp::Neg, diff_children_product(make_unary(ExprOp::Sin, n->a),
                                                           n->a, var));
    case ExprOp::Exp:
      return diff_children_product(make_unary(ExprOp::Exp, n->a), n->a, var);
    case ExprOp::Add:
      return make_binary(ExprOp::Add, diff_node(n->a, var), diff_node(n->b, var));
    case ExprOp::Sub:
      return make_binary(ExprOp::Sub, diff_node(n->a, var), diff_node(n->b, var));
    case ExprOp::Mul:
      return make_binary(ExprOp::Add,
                         make_binary(ExprOp::Mul, diff_node(n->a, var), n->b),
                         make_binary(ExprOp::Mul, n->a, diff_node(n->b, var)));
    case ExprOp::Div:
      // (a' b - a b') / b^2
      return make_binary(
          ExprOp::Div,
          make_binary(ExprOp::Sub, make_binary(ExprOp::Mul, diff_node(n->a, var), n->b),
                      make_binary(ExprOp::Mul, n->a, diff_node(n->b, var))),
          make_binary(ExprOp::Mul, n->b, n->b));
    case ExprOp::Pow: {
      // (p/q) a^((p-q)/q) a'
      const double c = static_cast<double>(n->pnum) / static_cast<double>(n->pden);
      return make_binary(
          ExprOp::Mul,
          make_binary(ExprOp::Mul, make_constant(Complex(c, 0.0)),
                      make_pow(n->a, n->pnum - n->pden, n->pden)),
          diff_node(n->a, var));
    }
  }
  throw Error("corrupt expression node");
}

bool depends_node(const ExprNode* n, int var) {
  switch (n->op) {
    case ExprOp::Constant: return false;
    case ExprOp::Variable: return n->var == var;
    default:
      if (n->a && depends_node(n->a.get(), var)) return true;
      if (n->b && depends_node(n->b.get(), var)) return true;
      return false;
  }
}

int max_var_node(const ExprNode* n) {
  switch (n->op) {
    case ExprOp::Constant: return -1;
    case ExprOp::Variable: return n->var == kLambdaVar ? -1 : n->var;
    default: {
      int m = -1;
      if (n->a) m = std::max(m, max_var_node(n->a.get()));
      if (n->b) m = std::max(m, max_var_node(n->b.get()));
      return m;
    }
  }
}

bool same_node(const ExprNode* x, const ExprNode* y) {
  if (x == y) return true;
  if (x->op != y->op) return false;
  switch (x->op) {
    case ExprOp::Constant: return x->value == y->value;
    case ExprOp::Variable: return x->var == y->var;
    case ExprOp::Pow:
      if (x->pnum != y->pnum || x->pden != y->pden) return false;
      return same_node(x->a.get(), y->a.get());
    default:
      if (static_cast<bool>(x->a) != static_cast<bool>(y->a)) return false;
      if (static_cast<bool>(x->b) != static_cast<bool>(y->b)) return false;
      if (x->a && !same_node(x->a.get(), y->a.get())) return false;
      if (x->b && !same_node(x->b.get(), y->b.get())) return false;
      return true;
  }
}

// Printing: precedence levels, atoms highest.
int prec(ExprOp op) {
  switch (op) {
    case ExprOp::Add:
    case ExprOp::Sub: return 1;
    case ExprOp::Mul:
    case ExprOp::Div: return 2;
    case ExprOp::Neg: return 3;
    case ExprOp::Pow: return 4;
    default: return 5;
  }
}

void render(const ExprNode* n, std::string& out, int min_prec);

void render_wrapped(const ExprNode* n, std::string& out, int min_prec) {
  if (prec(n->op) < min_prec) {
    out += '(';
    render(n, out, 0);
    out += ')';
  } else {
    render(n, out, 0);
  }
}

void render(const ExprNode* n, std::string& out, int /*min_prec*/) {
  switch (n->op) {
    case ExprOp::Constant:
      if (n->value.imag() == 0.0) {
        out += format_double(n->value.real());
      } else {
        // Not part of the file grammar; used only in diagnostics.
        out += '(';
        out += format_double(n->value.real());
        if (n->value.imag() >= 0.0) out += '+';
        out += format_double(n->value.imag());
        out += "i)";
      }
      return;
    case ExprOp::Variable:
      out += n->var == kLambdaVar ? std::string("lambda")
                                  : "u" + std::to_string(n->var + 1);
      return;
    case ExprOp::Neg:
      out += '-';
      render_wrapped(n->a.get(), out, 5);
      return;
    case ExprOp::Sqrt:
    case ExprOp::Sin:
    case ExprOp::Cos:
    case ExprOp::Exp: {
      switch (n->op) {
        case ExprOp::Sqrt: out += "sqrt("; break;
        case ExprOp::Sin: out += "sin("; break;
        case ExprOp::Cos: out += "cos("; break;
        default: out += "exp("; break;
      }
      render(n->a.get(), out, 0);
      out += ')';
      return;
    }
    case ExprOp::Add:
      render_wrapped(n->a.get(), out, 1);
      out += " + ";
      render_wrapped(n->b.get(), out, 2);
      return;
    case ExprOp::Sub:
      render_wrapped(n->a.get(), out, 1);
      out += " - ";
      render_wrapped(n->b.get(), out, 2);
      return;
    case ExprOp::Mul:
      render_wrapped(n->a.get(), out, 2);
      out += '*';
      render_wrapped(n->b.get(), out, 3);
      return;
    case ExprOp::Div:
      render_wrapped(n->a.get(), out, 2);
      out += '/';
      render_wrapped(n->b.get(), out, 3);
      return;
    case ExprOp::Pow:
      render_wrapped(n->a.get(), out, 5);
      out += '^';
      if (n->pden == 1 && n->pnum >= 0) {
        out += std::to_string(n->pnum);
      } else {
        out += '(';
        out += std::to_string(n->pnum);
        if (n->pden != 1) {
          out += '/';
          out += std::to_string(n->pden);
        }
        out += ')';
      }
      return;
  }
}

} // namespace

Expr::Expr() : node_(make_constant(Complex(0.0, 0.0))) {}
Expr::Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}

Expr Expr::constant(Complex value) { return Expr(make_constant(value)); }

Expr Expr::variable(int index) {
  if (index < 0 || index > 8) throw ConfigError("coordinate index out of range");
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::Variable;
  n->var = index;
  return Expr(NodePtr(std::move(n)));
}

Expr Expr::lambda() {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::Variable;
  n->var = kLambdaVar;
  return Expr(NodePtr(std::move(n)));
}

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(make_binary(ExprOp::Add, a.node_, b.node_));
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(make_binary(ExprOp::Sub, a.node_, b.node_));
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(make_binary(ExprOp::Mul, a.node_, b.node_));
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr(make_binary(ExprOp::Div, a.node_, b.node_));
}
Expr operator-(const Expr& a) { return Expr(make_unary(ExprOp::Neg, a.node_)); }

Expr sqrt(const Expr& a) { return Expr(make_unary(ExprOp::Sqrt, a.node_)); }
Expr sin(const Expr& a) { return Expr(make_unary(ExprOp::Sin, a.node_)); }
Expr cos(const Expr& a) { return Expr(make_unary(ExprOp::Cos, a.node_)); }
Expr exp(const Expr& a) { return Expr(make_unary(ExprOp::Exp, a.node_)); }

Expr Expr::pow(const Expr& base, long long num, long long den) {
  return Expr(make_pow(base.node_, num, den));
}

Expr Expr::diff(int var) const { return Expr(diff_node(node_, var)); }

Complex Expr::eval(std::span<const Complex> coords,
                   std::optional<Complex> lambda) const {
  return eval_node(node_.get(), coords, lambda);
}

Complex Expr::eval(std::initializer_list<Complex> coords,
                   std::optional<Complex> lambda) const {
  return eval(std::span<const Complex>(coords.begin(), coords.size()), lambda);
}

ExprOp Expr::op() const { return node_->op; }
bool Expr::is_constant() const { return node_->op == ExprOp::Constant; }
bool Expr::is_zero() const { return is_const(node_, Complex(0.0, 0.0)); }
Complex Expr::constant_value() const { return node_->value; }

bool Expr::depends_on(int var) const { return depends_node(node_.get(), var); }
int Expr::max_variable_index() const { return max_var_node(node_.get()); }

bool Expr::same_tree(const Expr& other) const {
  return same_node(node_.get(), other.node_.get());
}

std::string Expr::str() const {
  std::string out;
  render(node_.get(), out, 0);
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf.data(), ptr);
}

} // namespace hydrolax
