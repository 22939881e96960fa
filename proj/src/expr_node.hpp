#pragma once

#include <vector>

#include "altsum/expr.hpp"

namespace altsum::detail {

struct Node {
  NodeKind kind = NodeKind::Identity;
  double param = 0.0;
  std::vector<Expr> children;
  std::vector<double> coeffs;
  int truncation = 0;
};

}  // namespace altsum::detail
