#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include "altsum/error.hpp"
#include "altsum/properties.hpp"
#include "altsum/simd.hpp"

namespace altsum {

const char* to_string(WitnessForm f) {
  switch (f) {
    case WitnessForm::Superadditive: return "superadditive";
    case WitnessForm::Difference: return "difference";
    case WitnessForm::Midpoint: return "midpoint";
    case WitnessForm::Negativity: return "negativity";
    case WitnessForm::Decrease: return "decrease";
    case WitnessForm::PositiveOrigin: return "positive_origin";
  }
  return "?";
}

const char* to_string(GridLayout l) {
  switch (l) {
    case GridLayout::Uniform: return "uniform";
    case GridLayout::Geometric: return "geometric";
    case GridLayout::Mixed: return "mixed";
  }
  return "?";
}

namespace {

// The two function values the hybrid tolerance is scaled by, and the violation.
struct WitnessValues {
  double violation;
  double scale_a;
  double scale_b;
};

WitnessValues witness_values(const Expr& f, const Witness& w) {
  switch (w.form) {
    case WitnessForm::Superadditive: {
      double fx = eval(f, w.x), fy = eval(f, w.y);
      return {(fx + fy) - eval(f, w.x + w.y), fx, fy};
    }
    case WitnessForm::Difference: {
      double fd = eval(f, w.x - w.y), fy = eval(f, w.y);
      return {(fd + fy) - eval(f, w.x), fd, fy};
    }
    case WitnessForm::Midpoint: {
      double fx = eval(f, w.x), fy = eval(f, w.y);
      return {eval(f, (w.x + w.y) * 0.5) - 0.5 * (fx + fy), fx, fy};
    }
    case WitnessForm::Negativity: {
      double fx = eval(f, w.x);
      return {-fx, fx, fx};
    }
    case WitnessForm::Decrease: {
      double fx = eval(f, w.x), fy = eval(f, w.y);
      return {(fx + 0.0) - fy, fx, fy};
    }
    case WitnessForm::PositiveOrigin: {
      double f0 = eval(f, 0.0);
      return {f0, f0, f0};
    }
  }
  return {0.0, 0.0, 0.0};
}

}  // namespace

double recompute_violation(const Expr& expr, const Witness& w) {
  return witness_values(expr, w).violation;
}

double witness_tolerance(const Expr& expr, const Witness& w, double rel) {
  WitnessValues v = witness_values(expr, w);
  return hybrid_tolerance(v.scale_a, v.scale_b, rel);
}

bool reverifies(const Expr& expr, const Witness& w, double rel) {
  try {
    WitnessValues v = witness_values(expr, w);
    return v.violation > hybrid_tolerance(v.scale_a, v.scale_b, rel);
  } catch (const EvalError&) {
    return false;
  }
}

void GridSpec::validate() const {
  if (!(bound > 0.0) || !std::isfinite(bound)) throw ArgumentError("grid bound must be > 0");
  if (points < 2) throw ArgumentError("grid needs at least 2 points per axis");
}

std::vector<double> grid_points(const GridSpec& grid) {
  grid.validate();
  const double a = grid.bound;
  std::vector<double> pts{0.0, a};

  auto uniform = [&](int n) {
    std::vector<double> u;
    for (int i = 0; i < n; ++i) u.push_back(a * i / (n - 1));
    if (grid.seed != 0 && n > 2) {
      std::mt19937_64 rng(grid.seed);
      std::uniform_real_distribution<double> jitter(-0.25, 0.25);
      const double h = a / (n - 1);
      for (int i = 1; i + 1 < n; ++i) u[i] = std::clamp(u[i] + jitter(rng) * h, 0.0, a);
    }
    pts.insert(pts.end(), u.begin(), u.end());
  };
  auto geometric = [&](int n) {
    const double lo = a * 1e-6;
    for (int i = 0; i < n; ++i) {
      double t = n == 1 ? 1.0 : static_cast<double>(i) / (n - 1);
      pts.push_back(i == n - 1 ? a : lo * std::pow(1e6, t));
    }
  };

  switch (grid.layout) {
    case GridLayout::Uniform:
      uniform(grid.points);
      break;
    case GridLayout::Geometric:
      geometric(grid.points);
      break;
    case GridLayout::Mixed: {
      int nu = std::max(2, grid.points / 2);
      uniform(nu);
      geometric(std::max(1, grid.points - nu));
      break;
    }
  }
  std::ranges::sort(pts);
  auto dup = std::ranges::unique(pts);
  pts.erase(dup.begin(), dup.end());
  return pts;
}

PairSet superadditive_pairs(const std::vector<double>& points, double bound) {
  PairSet p;
  for (double x : points)
    for (double y : points) {
      if (y > x) break;
      if (x + y <= bound) {
        p.x.push_back(x);
        p.y.push_back(y);
      }
    }
  return p;
}

PairSet ordered_pairs(const std::vector<double>& points) {
  PairSet p;
  for (double x : points)
    for (double y : points) {
      if (y >= x) break;
      p.x.push_back(x);
      p.y.push_back(y);
    }
  return p;
}

namespace {

struct ChunkBest {
  bool found = false;
  double violation = -std::numeric_limits<double>::infinity();
  double x = 0.0;
  double y = 0.0;
};

// Max violation; ties go to the lexicographically smallest (x, y).
bool better(const ChunkBest& a, const ChunkBest& b) {
  if (!b.found) return a.found;
  if (!a.found) return false;
  if (a.violation != b.violation) return a.violation > b.violation;
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

// Fills the gap array (masked below tolerance) for pairs [begin, end).
using GapFn = void (*)(const Expr&, std::span<const double> xs, std::span<const double> ys,
                       double rel, std::span<double> gap);

unsigned resolve_workers(unsigned w) {
  if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
  return w;
}

ChunkBest scan_chunk(const Expr& expr, const PairSet& pairs, std::size_t begin, std::size_t end,
                     double rel, GapFn fn) {
  std::span<const double> xs(pairs.x.data() + begin, end - begin);
  std::span<const double> ys(pairs.y.data() + begin, end - begin);
  std::vector<double> gap(end - begin);
  fn(expr, xs, ys, rel, gap);
  simd::ArgMax m = simd::active().argmax(gap);
  ChunkBest best;
  if (!gap.empty() && m.value > -std::numeric_limits<double>::infinity()) {
    best = {true, m.value, xs[m.index], ys[m.index]};
  }
  return best;
}

// Partitions the pairs into contiguous chunks, one per worker, and reduces
// deterministically so the result does not depend on the worker count.
ChunkBest scan_pairs(const Expr& expr, const PairSet& pairs, const TestOptions& opts, GapFn fn) {
  const std::size_t n = pairs.size();
  const std::size_t workers = std::min<std::size_t>(resolve_workers(opts.workers), std::max<std::size_t>(n, 1));
  if (workers <= 1) return scan_chunk(expr, pairs, 0, n, opts.rel_tol, fn);

  std::vector<ChunkBest> results(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t begin = n * w / workers, end = n * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] {
      try {
        results[w] = scan_chunk(expr, pairs, begin, end, opts.rel_tol, fn);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  ChunkBest best;
  for (const ChunkBest& r : results)
    if (better(r, best)) best = r;
  return best;
}

void superadditive_gap(const Expr& f, std::span<const double> xs, std::span<const double> ys,
                       double rel, std::span<double> gap) {
  const auto& k = simd::active();
  std::vector<double> sums(xs.size());
  k.add(xs, ys, sums);
  std::vector<double> fx = eval_batch(f, xs), fy = eval_batch(f, ys), fs = eval_batch(f, sums);
  k.superadditive_gap(fx, fy, fs, gap);
  k.mask_within_tolerance(rel, fx, fy, gap);
}

void difference_gap(const Expr& f, std::span<const double> xs, std::span<const double> ys,
                    double rel, std::span<double> gap) {
  const auto& k = simd::active();
  std::vector<double> diffs(xs.size());
  k.scale(-1.0, ys, diffs);
  k.add(xs, diffs, diffs);
  std::vector<double> fd = eval_batch(f, diffs), fy = eval_batch(f, ys), fx = eval_batch(f, xs);
  k.superadditive_gap(fd, fy, fx, gap);
  k.mask_within_tolerance(rel, fd, fy, gap);
}

void midpoint_gap(const Expr& f, std::span<const double> xs, std::span<const double> ys,
                  double rel, std::span<double> gap) {
  const auto& k = simd::active();
  std::vector<double> mids(xs.size());
  k.add(xs, ys, mids);
  k.scale(0.5, mids, mids);
  std::vector<double> fm = eval_batch(f, mids), fx = eval_batch(f, xs), fy = eval_batch(f, ys);
  k.midpoint_gap(fm, fx, fy, gap);
  k.mask_within_tolerance(rel, fx, fy, gap);
}

// x unused for the partner: pairs are (x, x).
void negativity_gap(const Expr& f, std::span<const double> xs, std::span<const double>,
                    double rel, std::span<double> gap) {
  const auto& k = simd::active();
  std::vector<double> fx = eval_batch(f, xs);
  k.scale(-1.0, fx, gap);
  k.mask_within_tolerance(rel, fx, fx, gap);
}

void decrease_gap(const Expr& f, std::span<const double> xs, std::span<const double> ys,
                  double rel, std::span<double> gap) {
  const auto& k = simd::active();
  std::vector<double> fx = eval_batch(f, xs), fy = eval_batch(f, ys), zero(xs.size(), 0.0);
  k.superadditive_gap(fx, zero, fy, gap);
  k.mask_within_tolerance(rel, fx, fy, gap);
}

MembershipVerdict verdict_from(const ChunkBest& best, WitnessForm form, std::size_t tested,
                               const char* rule) {
  MembershipVerdict v;
  v.pairs_tested = tested;
  if (best.found) {
    Witness w{form, best.x, best.y, best.violation};
    v.witness = w;
    v.status.value = Status::Refuted;
    v.status.witness = w;
    v.status.rules.push_back(rule);
  }
  return v;
}

}  // namespace

MembershipVerdict test_superadditive(const Expr& expr, const PairSet& pairs,
                                     const TestOptions& opts) {
  return verdict_from(scan_pairs(expr, pairs, opts, superadditive_gap), WitnessForm::Superadditive,
                      pairs.size(), "grid: f(x + y) < f(x) + f(y)");
}

MembershipVerdict test_difference_form(const Expr& expr, const PairSet& pairs,
                                       const TestOptions& opts) {
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (!(pairs.x[i] >= pairs.y[i]))
      throw ArgumentError("difference form needs x >= y for every pair");
  return verdict_from(scan_pairs(expr, pairs, opts, difference_gap), WitnessForm::Difference,
                      pairs.size(), "grid: f(x) - f(y) < f(x - y)");
}

MembershipVerdict test_w_membership(const Expr& expr, const GridSpec& grid,
                                    const TestOptions& opts) {
  return test_superadditive(expr, superadditive_pairs(grid_points(grid), grid.bound), opts);
}

MembershipVerdict test_convexity(const Expr& expr, const GridSpec& grid, const TestOptions& opts) {
  PairSet pairs = ordered_pairs(grid_points(grid));
  return verdict_from(scan_pairs(expr, pairs, opts, midpoint_gap), WitnessForm::Midpoint,
                      pairs.size(), "grid: midpoint convexity fails");
}

MembershipVerdict test_nonnegative(const Expr& expr, const GridSpec& grid,
                                   const TestOptions& opts) {
  std::vector<double> pts = grid_points(grid);
  PairSet pairs{pts, pts};
  return verdict_from(scan_pairs(expr, pairs, opts, negativity_gap), WitnessForm::Negativity,
                      pairs.size(), "grid: f(x) < 0");
}

MembershipVerdict test_nondecreasing(const Expr& expr, const GridSpec& grid,
                                     const TestOptions& opts) {
  std::vector<double> pts = grid_points(grid);
  PairSet pairs;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    pairs.x.push_back(pts[i]);
    pairs.y.push_back(pts[i + 1]);
  }
  return verdict_from(scan_pairs(expr, pairs, opts, decrease_gap), WitnessForm::Decrease,
                      pairs.size(), "grid: f decreases between adjacent points");
}

MembershipVerdict test_origin(const Expr& expr, const TestOptions& opts) {
  MembershipVerdict v;
  v.pairs_tested = 1;
  Witness w{WitnessForm::PositiveOrigin, 0.0, 0.0, 0.0};
  w.violation = recompute_violation(expr, w);
  if (w.violation > witness_tolerance(expr, w, opts.rel_tol)) {
    v.witness = w;
    v.status.value = Status::Refuted;
    v.status.witness = w;
    v.status.rules.push_back("f(0) > 0");
  }
  return v;
}

MembershipVerdict run_grid_test(Property p, const Expr& expr, const GridSpec& grid,
                                const TestOptions& opts) {
  switch (p) {
    case Property::InW: return test_w_membership(expr, grid, opts);
    case Property::Convex: return test_convexity(expr, grid, opts);
    case Property::Nonnegative: return test_nonnegative(expr, grid, opts);
    case Property::Nondecreasing: return test_nondecreasing(expr, grid, opts);
    case Property::F0Nonpositive: return test_origin(expr, opts);
  }
  return {};
}

Classification classify(const Expr& expr, const GridSpec& grid, bool force_grid,
                        const TestOptions& opts) {
  grid.validate();
  Classification c;
  c.grid = grid;
  c.propagated = propagate(expr, opts.rel_tol);
  c.combined = c.propagated;
  for (Property p : kAllProperties) {
    const PropertyStatus& prop = c.propagated[p];
    if (prop.proven() && !force_grid) continue;
    MembershipVerdict v = run_grid_test(p, expr, grid, opts);
    if (v.status.refuted()) {
      if (prop.proven()) c.conflicts.push_back(p);
      else if (prop.unknown()) c.combined[p] = v.status;
    }
    c.grid_results.push_back({p, std::move(v)});
  }
  return c;
}

}  // namespace altsum
