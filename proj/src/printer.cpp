#include <string>

#include "altsum/expr.hpp"

// Canonical printing. The rules below are the inverse of the parser's
// precedence handling: a bare literal followed by '*' would be read as a
// Scale, so constants and scales inside products are parenthesised.

namespace altsum {
namespace {

std::string expr_text(const Expr& e);
std::string term_text(const Expr& e);

std::string call_text(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Identity: return "id()";
    case NodeKind::Power: return "pow(" + format_number(e.param()) + ")";
    case NodeKind::Floor: return "floor()";
    case NodeKind::XLogX: return "xlogx()";
    case NodeKind::Exp: return "exp()";
    case NodeKind::Compose:
      return "compose(" + expr_text(e.children()[0]) + ", " + expr_text(e.children()[1]) + ")";
    case NodeKind::Series: {
      std::string out = "series(";
      auto cs = e.coeffs();
      auto ts = e.children();
      for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) out += ", ";
        out += format_number(cs[i]) + ": " + expr_text(ts[i]);
      }
      if (e.truncation() != kDefaultSeriesTruncation) out += "; " + std::to_string(e.truncation());
      return out + ")";
    }
    default: return {};
  }
}

bool is_call(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Constant:
    case NodeKind::Sum:
    case NodeKind::Product:
    case NodeKind::Scale: return false;
    default: return true;
  }
}

std::string parens(const std::string& s) { return "(" + s + ")"; }

// Operand of '*' in a product.
std::string product_operand(const Expr& e) {
  return is_call(e) ? call_text(e) : parens(expr_text(e));
}

std::string scale_child(const Expr& e) {
  if (e.kind() == NodeKind::Sum || e.kind() == NodeKind::Product) return parens(expr_text(e));
  return term_text(e);
}

std::string term_text(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Sum: return parens(expr_text(e));
    case NodeKind::Constant: return format_number(e.param());
    case NodeKind::Scale: return format_number(e.param()) + "*" + scale_child(e.children()[0]);
    case NodeKind::Product: {
      const Expr& l = e.children()[0];
      const Expr& r = e.children()[1];
      std::string left = l.kind() == NodeKind::Product ? term_text(l) : product_operand(l);
      return left + "*" + product_operand(r);
    }
    default: return call_text(e);
  }
}

std::string expr_text(const Expr& e) {
  if (e.kind() != NodeKind::Sum) return term_text(e);
  const Expr& r = e.children()[1];
  return expr_text(e.children()[0]) + " + " + term_text(r);
}

}  // namespace

std::string print(const Expr& expr) { return expr_text(expr); }

}  // namespace altsum
