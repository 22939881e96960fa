#include "altsum/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <system_error>

#include "altsum/error.hpp"
#include "expr_node.hpp"

namespace altsum {

std::string EvalError::format_point(double x) { return format_number(x); }

SequenceError::SequenceError(Kind kind, std::size_t index)
    : Error(std::string(to_string(kind)) +
            (kind == Kind::Empty ? std::string() : " at index " + std::to_string(index))),
      kind_(kind),
      index_(index) {}

const char* to_string(SequenceError::Kind kind) {
  switch (kind) {
    case SequenceError::Kind::Empty: return "Empty";
    case SequenceError::Kind::OrderViolation: return "OrderViolation";
    case SequenceError::Kind::NegativeEntry: return "NegativeEntry";
    case SequenceError::Kind::NonFinite: return "NonFinite";
  }
  return "?";
}

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Identity: return "Identity";
    case NodeKind::Constant: return "Constant";
    case NodeKind::Power: return "Power";
    case NodeKind::Floor: return "Floor";
    case NodeKind::XLogX: return "XLogX";
    case NodeKind::Exp: return "Exp";
    case NodeKind::Sum: return "Sum";
    case NodeKind::Product: return "Product";
    case NodeKind::Scale: return "Scale";
    case NodeKind::Compose: return "Compose";
    case NodeKind::Series: return "Series";
  }
  return "?";
}

Expr make_node(detail::Node node) {
  return Expr(std::make_shared<const detail::Node>(std::move(node)));
}

NodeKind Expr::kind() const { return node_->kind; }
double Expr::param() const { return node_->param; }
std::span<const Expr> Expr::children() const { return node_->children; }
std::span<const double> Expr::coeffs() const { return node_->coeffs; }
int Expr::truncation() const { return node_->truncation; }

std::size_t Expr::node_count() const {
  std::size_t n = 1;
  for (const Expr& c : children()) n += c.node_count();
  return n;
}

std::size_t Expr::depth() const {
  std::size_t d = 0;
  for (const Expr& c : children()) d = std::max(d, c.depth());
  return d + 1;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const detail::Node& x = *a.node_;
  const detail::Node& y = *b.node_;
  if (x.kind != y.kind || x.param != y.param || x.truncation != y.truncation) return false;
  return std::ranges::equal(x.coeffs, y.coeffs) && std::ranges::equal(x.children, y.children);
}

namespace {

detail::Node leaf(NodeKind kind, double param = 0.0) {
  detail::Node n;
  n.kind = kind;
  n.param = param;
  return n;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ConstructionError(std::string(what) + " must be finite");
}

}  // namespace

Expr identity() { return make_node(leaf(NodeKind::Identity)); }

Expr constant(double c) {
  require_finite(c, "constant");
  return make_node(leaf(NodeKind::Constant, c));
}

Expr power(double r) {
  require_finite(r, "exponent");
  if (!(r > 0.0)) throw ConstructionError("pow exponent must be > 0, got " + format_number(r));
  return make_node(leaf(NodeKind::Power, r));
}

Expr floor_fn() { return make_node(leaf(NodeKind::Floor)); }
Expr xlogx() { return make_node(leaf(NodeKind::XLogX)); }
Expr exp_fn() { return make_node(leaf(NodeKind::Exp)); }

Expr sum(Expr left, Expr right) {
  detail::Node n = leaf(NodeKind::Sum);
  n.children = {std::move(left), std::move(right)};
  return make_node(std::move(n));
}

Expr product(Expr left, Expr right) {
  detail::Node n = leaf(NodeKind::Product);
  n.children = {std::move(left), std::move(right)};
  return make_node(std::move(n));
}

Expr scale(double alpha, Expr child) {
  require_finite(alpha, "scale factor");
  if (alpha == 0.0) throw ConstructionError("scale factor must be nonzero");
  detail::Node n = leaf(NodeKind::Scale, alpha);
  n.children = {std::move(child)};
  return make_node(std::move(n));
}

Expr compose(Expr outer, Expr inner) {
  detail::Node n = leaf(NodeKind::Compose);
  n.children = {std::move(outer), std::move(inner)};
  return make_node(std::move(n));
}

Expr series(std::vector<double> coeffs, std::vector<Expr> terms, int truncation) {
  if (coeffs.size() != terms.size())
    throw ConstructionError("series needs as many coefficients as terms");
  if (terms.empty()) throw ConstructionError("series needs at least one term");
  if (truncation < 1) throw ConstructionError("series truncation must be >= 1");
  if (terms.size() > static_cast<std::size_t>(truncation))
    throw ConstructionError("series has " + std::to_string(terms.size()) +
                            " terms but truncation " + std::to_string(truncation));
  for (double c : coeffs) require_finite(c, "series coefficient");
  detail::Node n = leaf(NodeKind::Series);
  n.coeffs = std::move(coeffs);
  n.children = std::move(terms);
  n.truncation = truncation;
  return make_node(std::move(n));
}

Expr exp_taylor_tail(int terms) {
  std::vector<double> coeffs;
  std::vector<Expr> powers;
  double factorial = 1.0;
  for (int k = 2; k < terms + 2; ++k) {
    factorial *= k;
    coeffs.push_back(1.0 / factorial);
    powers.push_back(power(k));
  }
  return series(std::move(coeffs), std::move(powers), terms);
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

namespace {

double checked(double v, double x, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite value in ") + what, x);
  return v;
}

// `x` is the original evaluation point, reported in errors.
double eval_at(const Expr& e, double t, double x) {
  switch (e.kind()) {
    case NodeKind::Identity:
      return t;
    case NodeKind::Constant:
      return e.param();
    case NodeKind::Power:
      return checked(std::pow(t, e.param()), x, "pow");
    case NodeKind::Floor:
      return std::floor(t);
    case NodeKind::XLogX:
      return t == 0.0 ? 0.0 : checked(t * std::log(t), x, "xlogx");
    case NodeKind::Exp:
      return checked(std::exp(t), x, "exp");
    case NodeKind::Sum: {
      double l = eval_at(e.children()[0], t, x);
      double r = eval_at(e.children()[1], t, x);
      return checked(l + r, x, "sum");
    }
    case NodeKind::Product: {
      double l = eval_at(e.children()[0], t, x);
      double r = eval_at(e.children()[1], t, x);
      return checked(l * r, x, "product");
    }
    case NodeKind::Scale:
      return checked(e.param() * eval_at(e.children()[0], t, x), x, "scale");
    case NodeKind::Compose: {
      double inner = eval_at(e.children()[1], t, x);
      if (!(inner >= 0.0))
        throw EvalError("composition inner value " + format_number(inner) +
                            " outside [0, inf)",
                        x);
      return eval_at(e.children()[0], inner, x);
    }
    case NodeKind::Series: {
      double acc = 0.0;
      auto cs = e.coeffs();
      auto ts = e.children();
      for (std::size_t i = 0; i < ts.size(); ++i) {
        double term = cs[i] * eval_at(ts[i], t, x);
        acc = acc + term;
      }
      return checked(acc, x, "series");
    }
  }
  return 0.0;
}

}  // namespace

double eval(const Expr& expr, double x) {
  if (!(x >= 0.0)) throw EvalError("evaluation point outside [0, inf)", x);
  if (!std::isfinite(x)) throw EvalError("non-finite evaluation point", x);
  return eval_at(expr, x, x);
}

std::vector<double> eval_batch(const Expr& expr, std::span<const double> xs) {
  std::vector<double> out(xs.size());
  eval_batch(expr, xs, out);
  return out;
}

}  // namespace altsum
