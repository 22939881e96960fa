#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "altsum/error.hpp"
#include "altsum/properties.hpp"
#include "corpus.hpp"

using namespace altsum;

namespace {

PropertySet props(const char* text) { return propagate(parse(text)); }

// Independent brute-force superadditivity oracle on a small grid.
bool superadditive_on(const std::function<double(double)>& f, const std::vector<double>& pts,
                      double bound) {
  for (double x : pts)
    for (double y : pts)
      if (x + y <= bound && f(x) + f(y) - f(x + y) > 1e-9 * std::max({1.0, std::abs(f(x)), std::abs(f(y))}))
        return false;
  return true;
}

}  // namespace

TEST(Propagate, Leaves) {
  auto floor = props("floor()");
  EXPECT_TRUE(floor.in_w.proven());
  EXPECT_TRUE(floor.convex.refuted());
  ASSERT_TRUE(floor.convex.witness);
  EXPECT_EQ(floor.convex.witness->form, WitnessForm::Midpoint);

  auto xl = props("xlogx()");
  EXPECT_TRUE(xl.convex.proven());
  EXPECT_TRUE(xl.f0_nonpositive.proven());
  EXPECT_TRUE(xl.in_w.proven());
  EXPECT_NE(std::find(xl.in_w.rules.begin(), xl.in_w.rules.end(), "convex with f(0) <= 0 is in W"),
            xl.in_w.rules.end())
      << ::testing::PrintToString(xl.in_w.rules);
  EXPECT_TRUE(xl.nonnegative.refuted());

  auto ex = props("exp()");
  EXPECT_TRUE(ex.convex.proven());
  EXPECT_TRUE(ex.in_w.refuted());
  EXPECT_TRUE(ex.f0_nonpositive.refuted());

  EXPECT_TRUE(props("pow(2)").in_w.proven());
  EXPECT_TRUE(props("pow(0.5)").in_w.refuted());
  EXPECT_TRUE(props("pow(0.5)").convex.refuted());
  EXPECT_TRUE(props("-1").in_w.proven());
  EXPECT_TRUE(props("2").in_w.refuted());
}

TEST(Propagate, Compounds) {
  EXPECT_TRUE(props("pow(2) + pow(4) + pow(6)").in_w.proven());
  EXPECT_TRUE(props("pow(2) + pow(4) + pow(6)").convex.proven());
  EXPECT_TRUE(props("exp() - id() - 1").in_w.proven());
  EXPECT_TRUE(props("compose(pow(2), floor())").in_w.proven());
  EXPECT_TRUE(props("3*floor()").in_w.proven());
  EXPECT_TRUE(propagate(exp_taylor_tail()).in_w.proven());
  EXPECT_TRUE(props("pow(2)*pow(3)").in_w.proven());
  // No rule covers these.
  EXPECT_TRUE(props("floor()*exp()").convex.unknown());
  EXPECT_TRUE(props("-1*pow(2)").convex.unknown());
}

TEST(Propagate, ProvenHasRulesRefutedHasReverifyingWitness) {
  fixtures::TreeGen gen(5);
  std::vector<Expr> exprs = fixtures::corpus();
  for (int i = 0; i < 200; ++i) exprs.push_back(gen.make(4));
  for (const Expr& e : exprs) {
    PropertySet p = propagate(e);
    for (Property prop : kAllProperties) {
      const PropertyStatus& s = p[prop];
      if (s.proven()) {
        EXPECT_FALSE(s.rules.empty()) << print(e) << " " << to_string(prop);
      }
      if (s.refuted()) {
        ASSERT_TRUE(s.witness) << print(e);
        EXPECT_TRUE(reverifies(e, *s.witness)) << print(e) << " " << to_string(prop);
      }
    }
  }
}

TEST(Grid, PointsAndPairs) {
  GridSpec g{10.0, 200, GridLayout::Mixed, 0};
  auto pts = grid_points(g);
  EXPECT_EQ(pts.front(), 0.0);
  EXPECT_EQ(pts.back(), 10.0);
  EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end()));
  EXPECT_EQ(std::adjacent_find(pts.begin(), pts.end()), pts.end());
  auto pairs = superadditive_pairs(pts, 10.0);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_GE(pairs.x[i], pairs.y[i]);
    EXPECT_LE(pairs.x[i] + pairs.y[i], 10.0);
  }
  auto ordered = ordered_pairs(std::vector<double>{0, 1, 2});
  EXPECT_EQ(ordered.size(), 3u);
  GridSpec bad{10.0, 1, GridLayout::Uniform, 0};
  EXPECT_THROW(bad.validate(), ArgumentError);
  EXPECT_NE(grid_points({10.0, 50, GridLayout::Uniform, 3}), grid_points({10.0, 50, GridLayout::Uniform, 0}));
}

TEST(Grid, VerdictsAgreeWithBruteForceOracle) {
  GridSpec g{10.0, 60, GridLayout::Uniform, 0};
  std::vector<double> pts = grid_points(g);
  struct Case {
    const char* text;
    double (*f)(double);
  };
  const Case cases[] = {
      {"pow(2)", [](double x) { return x * x; }},
      {"pow(0.5)", [](double x) { return std::sqrt(x); }},
      {"floor()", [](double x) { return std::floor(x); }},
      {"exp()", [](double x) { return std::exp(x); }},
      {"id() - 1", [](double x) { return x - 1; }},
      {"1 - id()", [](double x) { return 1 - x; }},
  };
  for (const Case& c : cases) {
    MembershipVerdict v = test_w_membership(parse(c.text), g);
    bool oracle = superadditive_on(c.f, pts, g.bound);
    EXPECT_EQ(v.status.refuted(), !oracle) << c.text;
    EXPECT_FALSE(v.status.proven());
    if (v.status.refuted()) {
      ASSERT_TRUE(v.witness);
      EXPECT_TRUE(reverifies(parse(c.text), *v.witness)) << c.text;
    }
  }
}

TEST(Grid, ConvexityAndMonotonicity) {
  GridSpec g;
  EXPECT_TRUE(test_convexity(floor_fn(), g).status.refuted());
  EXPECT_TRUE(test_convexity(exp_fn(), g).status.unknown());
  EXPECT_TRUE(test_convexity(parse("pow(0.5)"), g).status.refuted());
  EXPECT_TRUE(test_nonnegative(xlogx(), g).status.refuted());
  EXPECT_TRUE(test_nondecreasing(xlogx(), g).status.refuted());
  EXPECT_TRUE(test_nondecreasing(floor_fn(), g).status.unknown());
  EXPECT_TRUE(test_origin(exp_fn()).status.refuted());
  EXPECT_TRUE(test_origin(xlogx()).status.unknown());
}

TEST(Grid, WorkerCountDoesNotChangeWitness) {
  GridSpec g{10.0, 200, GridLayout::Mixed, 11};
  for (const Expr& e : fixtures::corpus()) {
    for (Property p : kAllProperties) {
      MembershipVerdict a = run_grid_test(p, e, g, {kDefaultRelTol, 1});
      MembershipVerdict b = run_grid_test(p, e, g, {kDefaultRelTol, 7});
      EXPECT_EQ(a.status.value, b.status.value);
      EXPECT_EQ(a.pairs_tested, b.pairs_tested);
      ASSERT_EQ(a.witness.has_value(), b.witness.has_value());
      if (a.witness) {
        EXPECT_EQ(a.witness->x, b.witness->x);
        EXPECT_EQ(a.witness->y, b.witness->y);
        EXPECT_EQ(a.witness->violation, b.witness->violation);
      }
    }
  }
}

TEST(Grid, DifferenceFormMatchesSuperadditiveForm) {
  // Dyadic grid: u + v and (u + v) - v are exact, so both testers see the same gaps.
  std::vector<double> pts;
  for (int i = 0; i <= 64; ++i) pts.push_back(i * 0.125);
  PairSet sup = superadditive_pairs(pts, 8.0);
  PairSet diff;
  for (std::size_t i = 0; i < sup.size(); ++i) {
    diff.x.push_back(sup.x[i] + sup.y[i]);
    diff.y.push_back(sup.y[i]);
  }
  for (const Expr& e : fixtures::corpus()) {
    MembershipVerdict a = test_superadditive(e, sup), b = test_difference_form(e, diff);
    EXPECT_EQ(a.status.value, b.status.value) << print(e);
    if (a.witness && b.witness) {
      EXPECT_EQ(a.witness->violation, b.witness->violation);
    }
  }
}

TEST(Classify, FloorXlogxExp) {
  GridSpec g;
  Classification f = classify(floor_fn(), g);
  EXPECT_TRUE(f.combined.in_w.proven());
  EXPECT_TRUE(f.combined.convex.refuted());
  EXPECT_TRUE(f.conflicts.empty());

  Classification e = classify(exp_fn(), g, true);
  EXPECT_TRUE(e.combined.convex.proven());
  EXPECT_TRUE(e.combined.in_w.refuted());
  EXPECT_TRUE(e.conflicts.empty());

  // A property propagation leaves Unknown is settled by the grid.
  Classification p = classify(parse("floor()*exp()"), g);
  EXPECT_TRUE(p.propagated.convex.unknown());
  EXPECT_TRUE(p.combined.convex.refuted());
}
