#pragma once

// Property flags for function expressions: derivation through closure rules
// (propagate) and numeric falsification on grids (test_*).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "altsum/expr.hpp"
#include "altsum/tolerance.hpp"

namespace altsum {

enum class Status { Proven, Refuted, Unknown };
const char* to_string(Status s);

/// Which inequality a witness violates, and therefore how to recompute it.
enum class WitnessForm {
  Superadditive,   // (f(x) + f(y)) - f(x + y)
  Difference,      // (f(x - y) + f(y)) - f(x), requires x >= y
  Midpoint,        // f((x + y) / 2) - (f(x) + f(y)) / 2
  Negativity,      // -f(x)
  Decrease,        // f(x) - f(y) with x < y
  PositiveOrigin,  // f(0)
};
const char* to_string(WitnessForm f);

struct Witness {
  WitnessForm form;
  double x = 0.0;
  double y = 0.0;  // unused by Negativity and PositiveOrigin
  double violation = 0.0;
};

/// Recomputes the violation a witness claims. Positive means the property fails.
double recompute_violation(const Expr& expr, const Witness& w);

/// Tolerance the violation must exceed for the witness to count.
double witness_tolerance(const Expr& expr, const Witness& w, double rel = kDefaultRelTol);

/// True if the recomputed violation exceeds the tolerance.
bool reverifies(const Expr& expr, const Witness& w, double rel = kDefaultRelTol);

struct PropertyStatus {
  Status value = Status::Unknown;
  /// Names of the rules applied, premises first. Non-empty when Proven.
  std::vector<std::string> rules;
  /// Present when Refuted.
  std::optional<Witness> witness;

  bool proven() const { return value == Status::Proven; }
  bool refuted() const { return value == Status::Refuted; }
  bool unknown() const { return value == Status::Unknown; }

  static PropertyStatus unknown_status() { return {}; }
};

enum class Property { InW, Convex, Nonnegative, Nondecreasing, F0Nonpositive };
inline constexpr Property kAllProperties[] = {Property::InW, Property::Convex,
                                              Property::Nonnegative, Property::Nondecreasing,
                                              Property::F0Nonpositive};
const char* to_string(Property p);

struct PropertySet {
  PropertyStatus in_w;
  PropertyStatus convex;
  PropertyStatus nonnegative;
  PropertyStatus nondecreasing;
  PropertyStatus f0_nonpositive;

  PropertyStatus& operator[](Property p);
  const PropertyStatus& operator[](Property p) const;
};

/// Derives properties bottom-up from closure rules. Never throws for a valid
/// tree; anything not derivable is Unknown. Every Refuted entry carries a
/// witness that reverifies.
PropertySet propagate(const Expr& expr, double rel_tol = kDefaultRelTol);

enum class GridLayout { Uniform, Geometric, Mixed };
const char* to_string(GridLayout l);

struct GridSpec {
  double bound = 10.0;  // A
  int points = 200;     // n
  GridLayout layout = GridLayout::Mixed;
  std::uint64_t seed = 0;  // 0: no jitter

  void validate() const;
};

/// Sorted, duplicate-free points in [0, A], always containing 0 and A.
std::vector<double> grid_points(const GridSpec& grid);

/// Pairs stored as parallel arrays, sorted lexicographically by (x, y).
struct PairSet {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t size() const { return x.size(); }
};

/// (x, y) from the grid with x >= y and x + y <= A.
PairSet superadditive_pairs(const std::vector<double>& points, double bound);
/// (x, y) from the grid with x > y.
PairSet ordered_pairs(const std::vector<double>& points);

struct TestOptions {
  double rel_tol = kDefaultRelTol;
  unsigned workers = 1;  // 0: one per hardware thread
};

struct MembershipVerdict {
  PropertyStatus status;  // Refuted or Unknown; a passing grid is never proof
  std::optional<Witness> witness;
  std::size_t pairs_tested = 0;
};

/// Superadditivity f(x + y) >= f(x) + f(y) over the given pairs.
MembershipVerdict test_superadditive(const Expr& expr, const PairSet& pairs,
                                     const TestOptions& opts = {});
/// The difference form f(x) - f(y) >= f(x - y), pairs with x >= y. Uses the
/// same gap arithmetic as test_superadditive with (u, v) = (x - y, y).
MembershipVerdict test_difference_form(const Expr& expr, const PairSet& pairs,
                                       const TestOptions& opts = {});

MembershipVerdict test_w_membership(const Expr& expr, const GridSpec& grid,
                                    const TestOptions& opts = {});
MembershipVerdict test_convexity(const Expr& expr, const GridSpec& grid,
                                 const TestOptions& opts = {});
MembershipVerdict test_nonnegative(const Expr& expr, const GridSpec& grid,
                                   const TestOptions& opts = {});
/// Adjacent grid points only.
MembershipVerdict test_nondecreasing(const Expr& expr, const GridSpec& grid,
                                     const TestOptions& opts = {});
MembershipVerdict test_origin(const Expr& expr, const TestOptions& opts = {});

MembershipVerdict run_grid_test(Property p, const Expr& expr, const GridSpec& grid,
                                const TestOptions& opts = {});

struct GridResult {
  Property property;
  MembershipVerdict verdict;
};

struct Classification {
  GridSpec grid;
  PropertySet propagated;
  std::vector<GridResult> grid_results;  // properties actually tested
  PropertySet combined;                  // propagated, plus grid refutations of Unknowns
  /// Properties Proven by propagation yet refuted on the grid (expected empty).
  std::vector<Property> conflicts;
};

/// propagate + grid tests. Proven properties skip their grid test unless
/// force_grid is set.
Classification classify(const Expr& expr, const GridSpec& grid, bool force_grid = false,
                        const TestOptions& opts = {});

}  // namespace altsum
