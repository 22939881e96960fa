#pragma once

#include <random>
#include <string>
#include <vector>

#include "altsum/expr.hpp"

namespace altsum::fixtures {

/// Built-in corpus: the expressions every cross-module check runs over.
inline const std::vector<std::string>& corpus_texts() {
  static const std::vector<std::string> texts = {
      "id()",   "-1",    "pow(2)",          "pow(1.5)",                 "floor()",
      "xlogx()", "exp()", "exp() - id() - 1", "pow(2) + pow(4) + pow(6)", "compose(pow(2), floor())",
  };
  return texts;
}

inline std::vector<Expr> corpus() {
  std::vector<Expr> out;
  for (const auto& t : corpus_texts()) out.push_back(parse(t));
  return out;
}

/// Random valid trees of bounded depth. Parameters are drawn from short
/// decimals and from full-precision doubles so printing has to round-trip both.
class TreeGen {
 public:
  explicit TreeGen(std::uint64_t seed) : rng_(seed) {}

  Expr make(int depth) {
    if (depth <= 1 || pick(3) == 0) return leaf();
    switch (pick(5)) {
      case 0: return sum(make(depth - 1), make(depth - 1));
      case 1: return product(make(depth - 1), make(depth - 1));
      case 2: return scale(nonzero(), make(depth - 1));
      case 3: return compose(make(depth - 1), make(depth - 1));
      default: {
        int k = 1 + pick(3);
        std::vector<double> c;
        std::vector<Expr> t;
        for (int i = 0; i < k; ++i) {
          c.push_back(nonzero());
          t.push_back(make(depth - 1));
        }
        return series(std::move(c), std::move(t), pick(2) ? kDefaultSeriesTruncation : k + pick(30));
      }
    }
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  double value() {
    if (pick(2)) return std::uniform_real_distribution<double>(-5.0, 5.0)(rng_);
    return static_cast<double>(std::uniform_int_distribution<int>(-500, 500)(rng_)) / 100.0;
  }

  double nonzero() {
    double v = 0.0;
    while (v == 0.0) v = value();
    return v;
  }

  Expr leaf() {
    switch (pick(6)) {
      case 0: return identity();
      case 1: return constant(value());
      case 2: {
        double r = 0.0;
        while (!(r > 0.0)) r = std::abs(value());
        return power(r);
      }
      case 3: return floor_fn();
      case 4: return xlogx();
      default: return exp_fn();
    }
  }

  std::mt19937_64 rng_;
};

}  // namespace altsum::fixtures
