#include <cctype>
#include <charconv>
#include <string>

#include "hydrolax/expr.hpp"

namespace hydrolax {

namespace {

struct Parser {
  std::string_view text;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression parse error at offset " + std::to_string(pos) +
                     ": " + what);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  double parse_number() {
    skip_ws();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc()) fail("malformed number");
    pos = static_cast<size_t>(ptr - text.data());
    return v;
  }

  long long parse_integer() {
    skip_ws();
    long long v = 0;
    bool negative = eat('-');
    if (!negative && peek() == '+') eat('+');
    skip_ws();
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc()) fail("integer expected");
    pos = static_cast<size_t>(ptr - text.data());
    return negative ? -v : v;
  }

  std::string parse_identifier() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) fail("identifier expected");
    return std::string(text.substr(start, pos - start));
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (eat('+')) {
        e = e + parse_term();
      } else if (eat('-')) {
        e = e - parse_term();
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (eat('*')) {
        e = e * parse_factor();
      } else if (eat('/')) {
        e = e / parse_factor();
      } else {
        return e;
      }
    }
  }

  Expr parse_factor() {
    if (eat('-')) return -parse_factor();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (!eat('^')) return base;
    // Exponent is a constant integer, or (p) / (p/q) for rationals.
    long long num = 0, den = 1;
    if (eat('(')) {
      num = parse_integer();
      if (eat('/')) den = parse_integer();
      if (!eat(')')) fail("')' expected after exponent");
    } else {
      num = parse_integer();
    }
    return Expr::pow(base, num, den);
  }

  Expr parse_primary() {
    const char c = peek();
    if (c == '(') {
      eat('(');
      Expr e = parse_expr();
      if (!eat(')')) fail("')' expected");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return Expr::constant(parse_number());
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::string name = parse_identifier();
      if (name == "lambda") return Expr::lambda();
      if (name.size() == 2 && name[0] == 'u' && name[1] >= '1' && name[1] <= '9')
        return Expr::variable(name[1] - '1');
      const bool call = eat('(');
      if (!call) fail("unknown identifier '" + name + "'");
      Expr arg = parse_expr();
      if (!eat(')')) fail("')' expected");
      if (name == "sqrt") return sqrt(arg);
      if (name == "sin") return sin(arg);
      if (name == "cos") return cos(arg);
      if (name == "exp") return exp(arg);
      fail("unknown function '" + name + "'");
    }
    fail("unexpected character");
  }
};

} // namespace

Expr parse_expression(std::string_view text) {
  Parser p{text};
  Expr e = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return e;
}

} // namespace hydrolax
