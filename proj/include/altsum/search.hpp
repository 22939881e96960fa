#pragma once

// Counterexample search for the generalized alternating-sum inequality.

#include <cstdint>
#include <optional>
#include <vector>

#include "altsum/expr.hpp"
#include "altsum/sequence.hpp"

namespace altsum {

/// m uniform draws in [0, A] sorted nonincreasing, n times. Deterministic in seed.
std::vector<AltSequence> sample_sequences(int m, int n, double bound, std::uint64_t seed);

enum class SearchStrategy { Random, Grid, Pattern };
const char* to_string(SearchStrategy s);
SearchStrategy parse_strategy(std::string_view name);

struct SearchConfig {
  int m = 2;
  double bound = 10.0;
  long budget = 10'000;
  std::uint64_t seed = 0;
  SearchStrategy strategy = SearchStrategy::Pattern;
  double rel_tol = kDefaultRelTol;
  unsigned workers = 1;  // restarts run in parallel; 0 = hardware threads

  void validate() const;
};

/// Early stop once margin < -(tol + kClearViolation).
inline constexpr double kClearViolation = 1e-3;

struct SearchOutcome {
  std::optional<AltSequence> best_seq;
  double best_margin = 0.0;  // negative = violation
  double best_tolerance = 0.0;
  long evaluations = 0;
  std::uint64_t seed = 0;
  bool violated = false;  // best_margin < -best_tolerance

  friend bool operator==(const SearchOutcome&, const SearchOutcome&) = default;
};

/// Minimizes alt_f_sum(f, a) - f(alt_sum(a)) over admissible a of length m in
/// [0, A]. Candidates are repaired (clamp, then sort nonincreasing) before
/// evaluation; candidates that fail to evaluate count against the budget.
SearchOutcome search_violation(const Expr& expr, const SearchConfig& cfg);

/// Descending sort plus clamp to [0, A].
std::vector<double> repair(std::vector<double> candidate, double bound);

}  // namespace altsum
