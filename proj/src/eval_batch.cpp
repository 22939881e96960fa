#include <cmath>
#include <string>
#include <vector>

#include "altsum/error.hpp"
#include "altsum/expr.hpp"
#include "altsum/simd.hpp"

namespace altsum {
namespace {

using simd::KernelTable;

void check_finite(const KernelTable& k, std::span<const double> v, std::span<const double> xs,
                  const char* what) {
  std::size_t bad = k.find_non_finite(v);
  if (bad != v.size()) throw EvalError(std::string("non-finite value in ") + what, xs[bad]);
}

// ts: values the node is applied to; xs: original points, for diagnostics.
void eval_node(const KernelTable& k, const Expr& e, std::span<const double> ts,
               std::span<const double> xs, std::span<double> out) {
  const std::size_t n = ts.size();
  switch (e.kind()) {
    case NodeKind::Identity:
      std::copy(ts.begin(), ts.end(), out.begin());
      return;
    case NodeKind::Constant:
      k.fill(e.param(), out);
      return;
    case NodeKind::Power: {
      const double r = e.param();
      for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(ts[i], r);
      check_finite(k, out, xs, "pow");
      return;
    }
    case NodeKind::Floor:
      k.floor(ts, out);
      return;
    case NodeKind::XLogX:
      for (std::size_t i = 0; i < n; ++i) out[i] = ts[i] == 0.0 ? 0.0 : ts[i] * std::log(ts[i]);
      check_finite(k, out, xs, "xlogx");
      return;
    case NodeKind::Exp:
      for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(ts[i]);
      check_finite(k, out, xs, "exp");
      return;
    case NodeKind::Sum:
    case NodeKind::Product: {
      std::vector<double> rhs(n);
      eval_node(k, e.children()[0], ts, xs, out);
      eval_node(k, e.children()[1], ts, xs, rhs);
      if (e.kind() == NodeKind::Sum) {
        k.add(out, rhs, out);
        check_finite(k, out, xs, "sum");
      } else {
        k.mul(out, rhs, out);
        check_finite(k, out, xs, "product");
      }
      return;
    }
    case NodeKind::Scale:
      eval_node(k, e.children()[0], ts, xs, out);
      k.scale(e.param(), out, out);
      check_finite(k, out, xs, "scale");
      return;
    case NodeKind::Compose: {
      std::vector<double> inner(n);
      eval_node(k, e.children()[1], ts, xs, inner);
      std::size_t bad = k.find_negative(inner);
      if (bad != n)
        throw EvalError("composition inner value " + format_number(inner[bad]) +
                            " outside [0, inf)",
                        xs[bad]);
      eval_node(k, e.children()[0], inner, xs, out);
      return;
    }
    case NodeKind::Series: {
      std::vector<double> term(n);
      k.fill(0.0, out);
      auto cs = e.coeffs();
      auto terms = e.children();
      for (std::size_t i = 0; i < terms.size(); ++i) {
        eval_node(k, terms[i], ts, xs, term);
        k.accumulate_scaled(cs[i], term, out);
      }
      check_finite(k, out, xs, "series");
      return;
    }
  }
}

}  // namespace

void eval_batch(const Expr& expr, std::span<const double> xs, std::span<double> out) {
  if (out.size() != xs.size()) throw ArgumentError("eval_batch: output size mismatch");
  const KernelTable& k = simd::active();
  std::size_t bad = k.find_negative(xs);
  if (bad != xs.size()) throw EvalError("evaluation point outside [0, inf)", xs[bad]);
  bad = k.find_non_finite(xs);
  if (bad != xs.size()) throw EvalError("non-finite evaluation point", xs[bad]);
  eval_node(k, expr, xs, xs, out);
}

}  // namespace altsum
