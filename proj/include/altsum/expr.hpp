#pragma once

// Function-expression trees over [0, inf), their text DSL and evaluation.
//
// Grammar accepted by parse():
//
//   expr      := term (('+'|'-') term)*
//   term      := factor ('*' factor)*
//   factor    := NUMBER | NUMBER '*' factor | call | '(' expr ')' | '-' factor
//   call      := 'id()' | 'pow(' NUMBER ')' | 'floor()' | 'xlogx()' | 'exp()'
//              | 'compose(' expr ',' expr ')' | 'series(' coeffpairs ')'
//   coeffpairs:= COEF ':' expr (',' COEF ':' expr)* [';' INTEGER]
//   COEF      := ['-'] NUMBER
//
// A '-' directly in front of a NUMBER in factor position is part of the
// literal, so "-2*pow(2)" is Scale(-2, Power(2)). Binary and unary minus on
// anything else desugar to Scale(-1, .) or, for a constant, to the negated
// constant. The optional INTEGER after ';' is the series truncation N
// (default 20).

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace altsum {

enum class NodeKind {
  Identity,
  Constant,
  Power,
  Floor,
  XLogX,
  Exp,
  Sum,
  Product,
  Scale,
  Compose,
  Series,
};

const char* to_string(NodeKind kind);

inline constexpr int kDefaultSeriesTruncation = 20;

class Expr;

namespace detail {
struct Node;
}

/// Immutable, cheaply copyable handle to an expression tree. Equality is
/// structural (parameters compared with ==).
class Expr {
 public:
  NodeKind kind() const;

  /// c for Constant, r for Power, alpha for Scale; 0 otherwise.
  double param() const;

  /// Sum/Product: {left, right}; Scale: {child}; Compose: {outer, inner};
  /// Series: the terms.
  std::span<const Expr> children() const;

  /// Series coefficients (empty for other kinds).
  std::span<const double> coeffs() const;

  /// Series truncation N (0 for other kinds).
  int truncation() const;

  std::size_t node_count() const;
  std::size_t depth() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::Node> node_;

  friend Expr make_node(detail::Node node);
};

// Constructors. They validate the node invariants and throw ConstructionError.
Expr identity();
Expr constant(double c);
Expr power(double r);
Expr floor_fn();
Expr xlogx();
Expr exp_fn();
Expr sum(Expr left, Expr right);
Expr product(Expr left, Expr right);
Expr scale(double alpha, Expr child);
Expr compose(Expr outer, Expr inner);
Expr series(std::vector<double> coeffs, std::vector<Expr> terms,
            int truncation = kDefaultSeriesTruncation);

/// Truncated Taylor tail of e^x - x - 1: sum_{k=2}^{N+1} x^k / k!.
Expr exp_taylor_tail(int terms = kDefaultSeriesTruncation);

Expr parse(std::string_view text);
std::string print(const Expr& expr);

/// Pointwise value. Throws EvalError for x < 0, NaN input, a composition whose
/// inner value leaves [0, inf), or any non-finite intermediate result.
double eval(const Expr& expr, double x);

/// Evaluates at every point of `xs` into `out` (same size) with the active
/// SIMD kernels. Results are bit-identical to eval() at each point.
void eval_batch(const Expr& expr, std::span<const double> xs, std::span<double> out);
std::vector<double> eval_batch(const Expr& expr, std::span<const double> xs);

/// Shortest decimal text that reads back to exactly `value`.
std::string format_number(double value);

}  // namespace altsum
