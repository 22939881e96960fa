#pragma once

// Admissible sequences a_1 >= a_2 >= ... >= a_m >= 0 and the alternating-sum
// inequalities evaluated over them.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "altsum/expr.hpp"
#include "altsum/tolerance.hpp"

namespace altsum {

/// Nonempty, nonincreasing, nonnegative, finite. Only validate_sequence()
/// creates one, so every check can trust the invariant.
class AltSequence {
 public:
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double front() const { return values_.front(); }

  friend bool operator==(const AltSequence&, const AltSequence&) = default;

 private:
  explicit AltSequence(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
  friend AltSequence validate_sequence(std::vector<double> values);
};

/// Throws SequenceError (Empty, OrderViolation(i) when a_i < a_{i+1},
/// NegativeEntry(m-1), NonFinite(i)). Never reorders.
AltSequence validate_sequence(std::vector<double> values);

/// Parses "a1,a2,..." (whitespace allowed) and validates it.
AltSequence parse_sequence(std::string_view text);

/// Left-to-right sum a_1 - a_2 + a_3 - ..., clamped to [0, a_1] to absorb
/// rounding.
double alt_sum(const AltSequence& seq);

/// S_1, S_2, ..., S_m (unclamped running alternating sums).
std::vector<double> partial_alt_sums(const AltSequence& seq);

/// f(a_1) - f(a_2) + ...; an evaluation failure is rethrown naming the index.
double alt_f_sum(const Expr& expr, const AltSequence& seq);

enum class CheckKind { Generalized, Weinberger, Szego };
const char* to_string(CheckKind k);

struct CheckResult {
  CheckKind kind = CheckKind::Generalized;
  double lhs = 0.0;     // f(S_m)
  double rhs = 0.0;     // S_m(f(a))
  double margin = 0.0;  // rhs - lhs
  double tolerance = 0.0;
  bool holds = true;    // margin >= -tolerance
  std::vector<double> sequence;
};

/// f(S_m) <= S_m(f(a)). No hypothesis on f is checked.
CheckResult check_generalized(const Expr& expr, const AltSequence& seq,
                              double rel_tol = kDefaultRelTol);

/// Generalized check for x^r. Throws ArgumentError (InvalidExponent) if r <= 1.
CheckResult check_weinberger(double r, const AltSequence& seq, double rel_tol = kDefaultRelTol);

/// Generalized check restricted to odd m. Throws ArgumentError (EvenLength).
CheckResult check_szego(const Expr& expr, const AltSequence& seq,
                        double rel_tol = kDefaultRelTol);

/// Runs one check per sequence, possibly on several threads; results keep
/// input order.
std::vector<CheckResult> check_batch(const Expr& expr, std::span<const AltSequence> seqs,
                                     CheckKind kind, double rel_tol = kDefaultRelTol,
                                     unsigned workers = 1);

}  // namespace altsum
