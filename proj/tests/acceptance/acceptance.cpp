// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "altsum/error.hpp"
#include "altsum/properties.hpp"
#include "altsum/search.hpp"
#include "altsum/sequence.hpp"
#include "corpus.hpp"

using namespace altsum;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Runs one check over sampled sequences whose length cycles through `lengths`.
// Returns the number that fail to hold.
int run_suite(const Expr& e, CheckKind kind, const std::vector<int>& lengths, int total,
              std::uint64_t seed, double* worst) {
  std::vector<AltSequence> seqs;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    int n = total / static_cast<int>(lengths.size()) +
            (static_cast<int>(i) < total % static_cast<int>(lengths.size()) ? 1 : 0);
    auto s = sample_sequences(lengths[i], n, 10.0, seed + i);
    seqs.insert(seqs.end(), s.begin(), s.end());
  }
  int failures = 0;
  for (const CheckResult& r : check_batch(e, seqs, kind, kDefaultRelTol, 0)) {
    *worst = std::min(*worst, r.margin / std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)}));
    if (!r.holds) ++failures;
  }
  return failures;
}

Outcome bellman() {
  Expr e = exp_fn();
  AltSequence s = validate_sequence({1.0, 0.1});
  auto t0 = Clock::now();
  CheckResult r = check_generalized(e, s);
  double ms = ms_since(t0);
  Outcome o;
  o.pass = std::abs(r.lhs - 2.4596) <= 1e-3 && std::abs(r.rhs - 1.61311) <= 1e-3 && !r.holds &&
           ms < 1.0;
  o.detail = "lhs " + fmt(r.lhs) + " rhs " + fmt(r.rhs) + (r.holds ? " holds" : " violated") +
             ", " + fmt(ms) + " ms";
  return o;
}

Outcome floor_even() {
  Expr e = floor_fn();
  AltSequence s = validate_sequence({4.6, 3.1, 2.8, 1.2});
  auto t0 = Clock::now();
  CheckResult r = check_generalized(e, s);
  double ms = ms_since(t0);
  Outcome o;
  o.pass = r.lhs == 3.0 && r.rhs == 2.0 && !r.holds && ms < 1.0;
  o.detail = "lhs " + fmt(r.lhs) + " rhs " + fmt(r.rhs) + (r.holds ? " holds" : " violated") +
             ", " + fmt(ms) + " ms";
  return o;
}

Outcome weinberger_suite() {
  auto t0 = Clock::now();
  int failures = 0;
  double worst = 0.0;
  const std::vector<int> lengths{1, 2, 3, 4, 5, 6, 7, 8, 9};
  for (double r : {1.1, 1.5, 2.0, 3.0, 7.3})
    failures += run_suite(power(r), CheckKind::Weinberger, lengths, 1000,
                          static_cast<std::uint64_t>(r * 1000), &worst);
  double ms = ms_since(t0);
  Outcome o;
  o.pass = failures == 0 && worst >= -1e-9 && ms < 10'000;
  o.detail = std::to_string(failures) + " failures in 5000, worst relative margin " + fmt(worst) +
             ", " + fmt(ms) + " ms";
  return o;
}

Outcome szego_suite() {
  auto t0 = Clock::now();
  int failures = 0;
  double worst = 0.0;
  const std::vector<int> odd{1, 3, 5, 7, 9};
  std::uint64_t seed = 500;
  for (const char* text : {"exp()", "xlogx()", "pow(2)", "pow(2)+pow(4)+pow(6)"})
    failures += run_suite(parse(text), CheckKind::Szego, odd, 1000, seed += 10, &worst);
  SearchConfig cfg;
  cfg.m = 2;
  cfg.budget = 10'000;
  cfg.seed = 1;
  SearchOutcome even = search_violation(exp_fn(), cfg);
  double ms = ms_since(t0);
  Outcome o;
  o.pass = failures == 0 && even.violated && even.best_margin < -1e-3 && ms < 30'000;
  o.detail = std::to_string(failures) + " failures in 4000 odd-length checks; even-length search margin " +
             fmt(even.best_margin) + " after " + std::to_string(even.evaluations) +
             " evaluations, " + fmt(ms) + " ms";
  return o;
}

Outcome generalized_suite() {
  auto t0 = Clock::now();
  int failures = 0;
  double worst = 0.0;
  const std::vector<int> lengths{1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::uint64_t seed = 900;
  for (const char* text : {"xlogx()", "exp()-id()-1", "pow(1.5)", "pow(2)+pow(4)+pow(6)"})
    failures += run_suite(parse(text), CheckKind::Generalized, lengths, 1000, seed += 10, &worst);
  double ms = ms_since(t0);
  Outcome o;
  o.pass = failures == 0 && ms < 10'000;
  o.detail = std::to_string(failures) + " failures in 4000, worst relative margin " + fmt(worst) +
             ", " + fmt(ms) + " ms";
  return o;
}

Outcome condition_equivalence() {
  GridSpec grid{10.0, 200, GridLayout::Uniform, 0};
  std::vector<double> pts = grid_points(grid);
  PairSet sup = superadditive_pairs(pts, grid.bound);
  PairSet diff;  // image of sup under (u, v) -> (u + v, v)
  for (std::size_t i = 0; i < sup.size(); ++i) {
    diff.x.push_back(sup.x[i] + sup.y[i]);
    diff.y.push_back(sup.y[i]);
  }
  Outcome o;
  int refuted = 0;
  for (const Expr& e : fixtures::corpus()) {
    MembershipVerdict a = test_superadditive(e, sup);
    MembershipVerdict b = test_difference_form(e, diff);
    if (a.status.value != b.status.value) {
      o.pass = false;
      o.detail += print(e) + " differs; ";
    }
    if (a.status.refuted()) ++refuted;
  }
  o.detail += std::to_string(fixtures::corpus().size()) + " expressions, " +
              std::to_string(sup.size()) + " pairs, " + std::to_string(refuted) +
              " refuted by both forms";
  return o;
}

Outcome consistency() {
  Outcome o;
  int witnesses = 0;
  auto verify = [&](const Expr& e, const PropertyStatus& s, const std::string& where) {
    if (!s.refuted()) return;
    ++witnesses;
    if (!s.witness || !reverifies(e, *s.witness)) {
      o.pass = false;
      o.detail += print(e) + " " + where + " witness does not re-verify; ";
    }
  };
  for (const Expr& e : fixtures::corpus()) {
    Classification c = classify(e, GridSpec{}, true, {kDefaultRelTol, 0});
    for (Property p : c.conflicts) {
      o.pass = false;
      o.detail += print(e) + " " + to_string(p) + " proven but grid-refuted; ";
    }
    for (Property p : kAllProperties) {
      verify(e, c.propagated[p], "propagated");
      verify(e, c.combined[p], "combined");
    }
    for (const GridResult& g : c.grid_results) verify(e, g.verdict.status, "grid");
  }
  o.detail += std::to_string(witnesses) + " refutations re-verified, no conflicts";
  return o;
}

Outcome origin_and_monotonicity() {
  Outcome o;
  int gated = 0, monotone = 0;
  GridSpec grid;
  for (const Expr& e : fixtures::corpus()) {
    PropertySet p = propagate(e);
    if (!p.in_w.proven()) continue;
    ++gated;
    if (!(eval(e, 0.0) <= 1e-9)) {
      o.pass = false;
      o.detail += print(e) + " has f(0) > 0; ";
    }
    if (p.nonnegative.proven()) {
      ++monotone;
      if (test_nondecreasing(e, grid).status.refuted()) {
        o.pass = false;
        o.detail += print(e) + " decreases on the grid; ";
      }
    }
  }
  o.detail += std::to_string(gated) + " members of W checked at 0, " + std::to_string(monotone) +
              " checked for monotonicity";
  return o;
}

Outcome search_determinism() {
  SearchConfig cfg;
  cfg.m = 2;
  cfg.seed = 7;
  cfg.budget = 10'000;
  cfg.workers = 1;
  SearchOutcome serial = search_violation(exp_fn(), cfg);
  cfg.workers = std::max(4u, std::thread::hardware_concurrency());
  SearchOutcome parallel = search_violation(exp_fn(), cfg);
  Outcome o;
  o.pass = serial == parallel;
  o.detail = "1 vs " + std::to_string(cfg.workers) + " workers: margin " +
             fmt(serial.best_margin) + " / " + fmt(parallel.best_margin) + ", evaluations " +
             std::to_string(serial.evaluations) + " / " + std::to_string(parallel.evaluations);
  return o;
}

Outcome round_trip() {
  fixtures::TreeGen gen(20261017);
  Outcome o;
  std::size_t max_depth = 0;
  for (int i = 0; i < 500; ++i) {
    Expr e = gen.make(6);
    max_depth = std::max(max_depth, e.depth());
    try {
      if (!(parse(print(e)) == e)) {
        o.pass = false;
        o.detail += "mismatch: " + print(e) + "; ";
      }
    } catch (const Error& err) {
      o.pass = false;
      o.detail += std::string("parse failed: ") + err.what() + "; ";
    }
  }
  if (max_depth > 6) o.pass = false;
  o.detail += "500 trees, max depth " + std::to_string(max_depth);
  return o;
}

Outcome replicate_cli(Clock::time_point suite_start) {
  int status = std::system(ALTSUM_CLI_PATH " replicate > /dev/null 2>&1");
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  double total = ms_since(suite_start);
  Outcome o;
  o.pass = code == 0 && total < 60'000;
  o.detail = "exit " + std::to_string(code) + ", suite total " + fmt(total) + " ms";
  return o;
}

}  // namespace

int main() {
  const auto start = Clock::now();
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"bellman counterexample", bellman},
      {"floor even-term failure", floor_even},
      {"weinberger suite", weinberger_suite},
      {"szego suite", szego_suite},
      {"generalized suite", generalized_suite},
      {"W condition equivalence", condition_equivalence},
      {"propagation/grid consistency", consistency},
      {"f(0) gate and monotonicity", origin_and_monotonicity},
      {"search determinism", search_determinism},
      {"parser round-trip", round_trip},
      {"replicate exits 0", [&] { return replicate_cli(start); }},
  };
  int failed = 0, index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
