#ifndef HYDROLAX_EXPR_HPP
#define HYDROLAX_EXPR_HPP

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "hydrolax/errors.hpp"

namespace hydrolax {

using Complex = std::complex<double>;

/// Variable index used for the spectral parameter; coordinates are 0-based.
inline constexpr int kLambdaVar = -1;

/// Principal-branch complex square root, branch cut on the negative real
/// axis and continuous from above: sqrt of a negative real r is +i*sqrt(|r|),
/// also when the imaginary part is -0.0.
Complex principal_sqrt(Complex z);

/// Principal-branch rational power z^(num/den), den >= 1. Integer exponents
/// use exact repeated multiplication.
Complex principal_pow(Complex z, long long num, long long den);

enum class ExprOp : std::uint8_t {
  Constant,
  Variable,
  Neg,
  Sqrt,
  Sin,
  Cos,
  Exp,
  Add,
  Sub,
  Mul,
  Div,
  Pow, // exponent is a constant rational stored on the node
};

struct ExprNode;

/// Immutable scalar expression over coordinates u1..u9 and lambda.
///
/// Handles are cheap to copy and safe to share across threads; evaluation
/// and differentiation are pure. Construction performs constant folding and
/// the obvious identity eliminations (x+0, 1*x, 0/x, e^1, ...), which is
/// what keeps derived residual expressions exactly zero on exact data.
class Expr {
public:
  /// Default-constructed expression is the constant 0.
  Expr();

  static Expr constant(Complex value);
  static Expr constant(double value) { return constant(Complex(value, 0.0)); }
  static Expr variable(int index); // 0-based coordinate index
  static Expr lambda();

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  friend Expr sqrt(const Expr& a);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);

  /// base^(num/den) with a constant rational exponent (den != 0).
  static Expr pow(const Expr& base, long long num, long long den = 1);

  /// Exact partial derivative with respect to a coordinate or kLambdaVar.
  Expr diff(int var) const;

  /// Evaluate at an assignment of the coordinates (and lambda, if used).
  /// Throws UnboundVariable / DivisionByZero.
  Complex eval(std::span<const Complex> coords,
               std::optional<Complex> lambda = std::nullopt) const;
  Complex eval(std::initializer_list<Complex> coords,
               std::optional<Complex> lambda = std::nullopt) const;

  ExprOp op() const;
  bool is_constant() const;
  bool is_zero() const;           // the constant 0
  Complex constant_value() const; // valid when is_constant()

  bool depends_on(int var) const; // var index or kLambdaVar
  bool depends_on_lambda() const { return depends_on(kLambdaVar); }
  int max_variable_index() const; // -1 when no coordinate appears

  /// Structural equality of the trees (used by tests and round-trips).
  bool same_tree(const Expr& other) const;

  /// Canonical text form; parse_expression(str()) rebuilds the same tree.
  std::string str() const;

private:
  explicit Expr(std::shared_ptr<const ExprNode> n);
  std::shared_ptr<const ExprNode> node_;
};

/// Parse the problem-file expression grammar: identifiers u1..u9 and
/// lambda, decimal literals, operators + - * / ^, functions sqrt, sin,
/// cos, exp, parentheses; whitespace insensitive. Rational exponents are
/// written ^(p/q). Throws ParseError.
Expr parse_expression(std::string_view text);

/// Shortest round-trip decimal form of a double ("0.2", "1", "1e-06").
std::string format_double(double v);

} // namespace hydrolax

#endif
