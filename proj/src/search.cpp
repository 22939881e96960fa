#include "altsum/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "altsum/error.hpp"

namespace altsum {

const char* to_string(SearchStrategy s) {
  switch (s) {
    case SearchStrategy::Random: return "random";
    case SearchStrategy::Grid: return "grid";
    case SearchStrategy::Pattern: return "pattern";
  }
  return "?";
}

SearchStrategy parse_strategy(std::string_view name) {
  if (name == "random") return SearchStrategy::Random;
  if (name == "grid") return SearchStrategy::Grid;
  if (name == "pattern") return SearchStrategy::Pattern;
  throw ArgumentError("unknown search strategy '" + std::string(name) + "'");
}

void SearchConfig::validate() const {
  if (m < 2) throw ArgumentError("search needs m >= 2");
  if (!(bound > 0.0) || !std::isfinite(bound)) throw ArgumentError("search bound must be > 0");
  if (budget < m) throw ArgumentError("search budget must be >= m");
  if (!(rel_tol >= 0.0)) throw ArgumentError("tolerance must be >= 0");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per restart.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index + 1)));
}

// Uniform in [0, bound], independent of the standard library's distributions.
double uniform(std::mt19937_64& rng, double bound) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * bound;
}

std::vector<double> random_sequence(std::mt19937_64& rng, int m, double bound) {
  std::vector<double> v(static_cast<std::size_t>(m));
  for (double& x : v) x = uniform(rng, bound);
  std::ranges::sort(v, std::greater<>{});
  return v;
}

}  // namespace

std::vector<AltSequence> sample_sequences(int m, int n, double bound, std::uint64_t seed) {
  if (m < 1 || n < 1) throw ArgumentError("sample_sequences needs m >= 1 and n >= 1");
  if (!(bound > 0.0) || !std::isfinite(bound)) throw ArgumentError("bound must be > 0");
  std::mt19937_64 rng(seed);
  std::vector<AltSequence> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(validate_sequence(random_sequence(rng, m, bound)));
  return out;
}

std::vector<double> repair(std::vector<double> candidate, double bound) {
  for (double& x : candidate) x = std::isnan(x) ? 0.0 : std::clamp(x, 0.0, bound);
  std::ranges::sort(candidate, std::greater<>{});
  return candidate;
}

namespace {

struct RestartResult {
  bool found = false;
  double margin = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  std::vector<double> seq;
  long evaluations = 0;
  bool clear = false;
};

class Restart {
 public:
  Restart(const Expr& expr, const SearchConfig& cfg, long cap)
      : expr_(expr), cfg_(cfg), cap_(cap) {}

  bool exhausted() const { return result_.evaluations >= cap_ || result_.clear; }

  // Evaluates a repaired candidate; returns its margin (+inf if rejected).
  double evaluate(const std::vector<double>& cand) {
    ++result_.evaluations;
    try {
      CheckResult c = check_generalized(expr_, validate_sequence(cand), cfg_.rel_tol);
      if (!result_.found || c.margin < result_.margin) {
        result_.found = true;
        result_.margin = c.margin;
        result_.tolerance = c.tolerance;
        result_.seq = cand;
        result_.clear = c.margin < -(c.tolerance + kClearViolation);
      }
      return c.margin;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  }

  RestartResult take() { return std::move(result_); }

 private:
  const Expr& expr_;
  const SearchConfig& cfg_;
  long cap_;
  RestartResult result_;
};

// Random start, then compass search along each coordinate with a halving step.
RestartResult pattern_restart(const Expr& expr, const SearchConfig& cfg, std::uint64_t index,
                              long cap) {
  Restart run(expr, cfg, cap);
  auto rng = stream(cfg.seed, index);
  std::vector<double> x = random_sequence(rng, cfg.m, cfg.bound);
  double current = run.evaluate(x);
  double step = cfg.bound / 8.0;
  const double min_step = 1e-6 * cfg.bound;
  while (!run.exhausted() && step >= min_step) {
    bool improved = false;
    for (std::size_t i = 0; i < x.size() && !run.exhausted(); ++i) {
      for (double dir : {1.0, -1.0}) {
        if (run.exhausted()) break;
        std::vector<double> cand = x;
        cand[i] += dir * step;
        cand = repair(std::move(cand), cfg.bound);
        double margin = run.evaluate(cand);
        if (margin < current) {
          x = std::move(cand);
          current = margin;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return run.take();
}

constexpr long kRandomBatch = 64;

RestartResult random_restart(const Expr& expr, const SearchConfig& cfg, std::uint64_t index,
                             long cap) {
  Restart run(expr, cfg, cap);
  auto rng = stream(cfg.seed, index);
  for (long i = 0; i < kRandomBatch && !run.exhausted(); ++i)
    run.evaluate(random_sequence(rng, cfg.m, cfg.bound));
  return run.take();
}

double binomial(long n, long k) {
  double r = 1.0;
  for (long i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Every nonincreasing sequence over k equispaced levels, with the largest k
// whose count fits the budget.
RestartResult grid_restart(const Expr& expr, const SearchConfig& cfg, long cap) {
  Restart run(expr, cfg, cap);
  const long m = cfg.m;
  long k = 2;
  while (binomial(k + 1 + m - 1, m) <= static_cast<double>(cfg.budget)) ++k;
  std::vector<double> levels(static_cast<std::size_t>(k));
  for (long j = 0; j < k; ++j) levels[j] = cfg.bound * static_cast<double>(j) / static_cast<double>(k - 1);

  // idx is nonincreasing; odometer over such tuples.
  std::vector<long> idx(static_cast<std::size_t>(m), k - 1);
  for (;;) {
    if (run.exhausted()) break;
    std::vector<double> cand(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) cand[i] = levels[idx[i]];
    run.evaluate(cand);
    long pos = m - 1;
    while (pos >= 0 && idx[pos] == 0) --pos;
    if (pos < 0) break;
    --idx[pos];
    for (long i = pos + 1; i < m; ++i) idx[i] = idx[pos];
  }
  return run.take();
}

RestartResult run_restart(const Expr& expr, const SearchConfig& cfg, std::uint64_t index,
                          long cap) {
  switch (cfg.strategy) {
    case SearchStrategy::Pattern: return pattern_restart(expr, cfg, index, cap);
    case SearchStrategy::Random: return random_restart(expr, cfg, index, cap);
    case SearchStrategy::Grid: return grid_restart(expr, cfg, cap);
  }
  return {};
}

}  // namespace

SearchOutcome search_violation(const Expr& expr, const SearchConfig& cfg) {
  cfg.validate();
  unsigned workers = cfg.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                      : cfg.workers;
  if (cfg.strategy == SearchStrategy::Grid) workers = 1;

  RestartResult best;
  long used = 0;
  bool stop = false;
  std::uint64_t next = 0;

  // Restarts run in waves, each speculatively capped by the budget left at the
  // start of the wave. They are then accounted in index order; a restart that
  // would overrun is replayed with its exact cap, which yields the prefix of
  // the same deterministic run. The result is independent of `workers`.
  while (!stop && used < cfg.budget) {
    const long cap = cfg.budget - used;
    std::vector<RestartResult> wave(workers);
    if (workers == 1) {
      wave[0] = run_restart(expr, cfg, next, cap);
    } else {
      std::vector<std::thread> threads;
      for (unsigned j = 0; j < workers; ++j)
        threads.emplace_back([&, j] { wave[j] = run_restart(expr, cfg, next + j, cap); });
      for (auto& t : threads) t.join();
    }
    for (unsigned j = 0; j < workers; ++j) {
      const long remaining = cfg.budget - used;
      if (remaining <= 0) break;
      RestartResult r = std::move(wave[j]);
      if (r.evaluations > remaining) r = run_restart(expr, cfg, next + j, remaining);
      used += r.evaluations;
      if (r.found && (!best.found || r.margin < best.margin)) best = std::move(r);
      if (best.clear) {
        stop = true;
        break;
      }
    }
    next += workers;
    if (cfg.strategy == SearchStrategy::Grid) break;
  }

  SearchOutcome out;
  out.evaluations = used;
  out.seed = cfg.seed;
  if (best.found) {
    out.best_seq = validate_sequence(best.seq);
    out.best_margin = best.margin;
    out.best_tolerance = best.tolerance;
    out.violated = best.margin < -best.tolerance;
  } else {
    out.best_margin = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace altsum
