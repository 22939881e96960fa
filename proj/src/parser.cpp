#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "altsum/error.hpp"
#include "altsum/expr.hpp"

namespace altsum {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (!at_end()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    skip_ws();
    if (at_end()) fail(std::string("expected '") + c + "' but input ended");
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  static bool starts_number(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  // Unsigned decimal literal with optional fraction and exponent.
  double number() {
    skip_ws();
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (peek() == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail_at("expected a number", start);
    if (peek() == 'e' || peek() == 'E') {
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || ptr != text_.data() + pos_ || !std::isfinite(value))
      fail_at("number out of range", start);
    return value;
  }

  double signed_number() {
    skip_ws();
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      ++pos_;
    }
    double v = number();
    return negative ? -v : v;
  }

  template <class F>
  Expr build(std::size_t at, F&& f) {
    try {
      return f();
    } catch (const ConstructionError& e) {
      fail_at(e.what(), at);
    }
  }

  static Expr negate(const Expr& e) {
    if (e.kind() == NodeKind::Constant) return constant(-e.param());
    return scale(-1.0, e);
  }

  Expr parse_expr() {
    Expr acc = parse_term();
    for (;;) {
      if (accept('+')) {
        acc = sum(acc, parse_term());
      } else if (accept('-')) {
        acc = sum(acc, negate(parse_term()));
      } else {
        return acc;
      }
    }
  }

  Expr parse_term() {
    Expr acc = parse_factor();
    while (accept('*')) acc = product(acc, parse_factor());
    return acc;
  }

  // NUMBER | NUMBER '*' factor, with the literal already read.
  Expr literal_factor(double value, std::size_t at) {
    if (accept('*')) {
      Expr child = parse_factor();
      return build(at, [&] { return scale(value, child); });
    }
    return constant(value);
  }

  Expr parse_factor() {
    skip_ws();
    const std::size_t at = pos_;
    if (at_end()) fail("unexpected end of input");
    char c = peek();
    if (starts_number(c)) return literal_factor(number(), at);
    if (c == '-') {
      ++pos_;
      skip_ws();
      if (starts_number(peek())) return literal_factor(-number(), at);
      return negate(parse_factor());
    }
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_call();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                         text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect_no_args(const std::string& name) {
    if (!accept(')')) fail("arity mismatch: " + name + "() takes no arguments");
  }

  Expr parse_call() {
    const std::size_t at = pos_;
    const std::string name = identifier();
    const bool known = name == "id" || name == "pow" || name == "floor" || name == "xlogx" ||
                       name == "exp" || name == "compose" || name == "series";
    if (!known) fail_at("unknown function '" + name + "'", at);
    expect('(');

    if (name == "id") return expect_no_args(name), identity();
    if (name == "floor") return expect_no_args(name), floor_fn();
    if (name == "xlogx") return expect_no_args(name), xlogx();
    if (name == "exp") return expect_no_args(name), exp_fn();

    if (name == "pow") {
      skip_ws();
      if (peek() == ')') fail("arity mismatch: pow() takes exactly one numeric argument");
      double r = signed_number();
      if (accept(',')) fail("arity mismatch: pow() takes exactly one numeric argument");
      expect(')');
      return build(at, [&] { return power(r); });
    }

    if (name == "compose") {
      skip_ws();
      if (peek() == ')') fail("arity mismatch: compose() takes two arguments");
      Expr outer = parse_expr();
      if (!accept(',')) {
        skip_ws();
        if (peek() == ')') fail("arity mismatch: compose() takes two arguments");
        expect(',');
      }
      Expr inner = parse_expr();
      if (accept(',')) fail("arity mismatch: compose() takes two arguments");
      expect(')');
      return compose(outer, inner);
    }

    // series
    skip_ws();
    if (peek() == ')') fail("arity mismatch: series() needs at least one 'coef: expr' pair");
    std::vector<double> coeffs;
    std::vector<Expr> terms;
    int truncation = kDefaultSeriesTruncation;
    do {
      coeffs.push_back(signed_number());
      expect(':');
      terms.push_back(parse_expr());
    } while (accept(','));
    if (accept(';')) {
      skip_ws();
      const std::size_t nat = pos_;
      double n = number();
      if (n != std::floor(n) || n < 1 || n > 1e6) fail_at("series truncation must be a positive integer", nat);
      truncation = static_cast<int>(n);
    }
    expect(')');
    return build(at, [&] { return series(coeffs, terms, truncation); });
  }
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace altsum
