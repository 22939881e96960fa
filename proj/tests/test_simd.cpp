#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "altsum/error.hpp"
#include "altsum/expr.hpp"
#include "altsum/simd.hpp"
#include "corpus.hpp"

using namespace altsum;
namespace sd = altsum::simd;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!sd::isa_available(sd::Isa::Avx2)) GTEST_SKIP() << "AVX2 not available";
  }
  const sd::KernelTable& s = sd::table(sd::Isa::Scalar);
  const sd::KernelTable& v = *sd::detail::avx2_table();
};

void expect_same(const std::vector<double>& a, const std::vector<double>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    ASSERT_TRUE(same_bits(a[i], b[i])) << "index " << i << ": " << a[i] << " vs " << b[i];
}

}  // namespace

TEST(ScalarKernels, ReferenceValues) {
  const auto& s = sd::table(sd::Isa::Scalar);
  std::vector<double> a{1, 2, 3}, b{4, 5, 6}, out(3);
  s.add(a, b, out);
  EXPECT_EQ(out, (std::vector<double>{5, 7, 9}));
  s.superadditive_gap(a, b, std::vector<double>{5, 8, 8}, out);
  EXPECT_EQ(out, (std::vector<double>{0, -1, 1}));
  s.midpoint_gap(std::vector<double>{2, 2, 2}, a, b, out);
  EXPECT_EQ(out, (std::vector<double>{-0.5, -1.5, -2.5}));
  std::vector<double> gap{1e-12, 0.5, 2.0};
  s.mask_within_tolerance(1e-9, std::vector<double>{1, 1, 1e10}, std::vector<double>{1, 1, 1},
                          gap);
  EXPECT_EQ(gap[0], -std::numeric_limits<double>::infinity());
  EXPECT_EQ(gap[1], 0.5);
  EXPECT_EQ(gap[2], -std::numeric_limits<double>::infinity());
  auto am = s.argmax(std::vector<double>{1, 3, 2, 3});
  EXPECT_EQ(am.index, 1u);
  EXPECT_EQ(am.value, 3.0);
  EXPECT_EQ(s.argmax(std::vector<double>{}).value, -std::numeric_limits<double>::infinity());
  EXPECT_EQ(s.find_negative(std::vector<double>{0, 1, -0.0, -1}), 3u);
  EXPECT_EQ(s.find_non_finite(std::vector<double>{0, 1, NAN}), 2u);
}

TEST_F(KernelEquivalence, ElementwiseBitIdentical) {
  std::mt19937_64 rng(1);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 17u, 64u, 1000u, 1023u}) {
    auto a = random_vec(rng, n, -1e3, 1e3), b = random_vec(rng, n, -1e3, 1e3),
         c = random_vec(rng, n, -1e3, 1e3);
    std::vector<double> o1(n), o2(n);
    s.add(a, b, o1), v.add(a, b, o2), expect_same(o1, o2);
    s.mul(a, b, o1), v.mul(a, b, o2), expect_same(o1, o2);
    s.scale(-0.37, a, o1), v.scale(-0.37, a, o2), expect_same(o1, o2);
    s.floor(a, o1), v.floor(a, o2), expect_same(o1, o2);
    s.fill(2.5, o1), v.fill(2.5, o2), expect_same(o1, o2);
    o1 = c, o2 = c;
    s.accumulate_scaled(1.0 / 3.0, a, o1), v.accumulate_scaled(1.0 / 3.0, a, o2);
    expect_same(o1, o2);
    s.superadditive_gap(a, b, c, o1), v.superadditive_gap(a, b, c, o2), expect_same(o1, o2);
    s.midpoint_gap(a, b, c, o1), v.midpoint_gap(a, b, c, o2), expect_same(o1, o2);
    std::vector<double> g1 = c, g2 = c;
    s.mask_within_tolerance(1e-3, a, b, g1), v.mask_within_tolerance(1e-3, a, b, g2);
    expect_same(g1, g2);
  }
}

TEST_F(KernelEquivalence, ReductionsAgree) {
  std::mt19937_64 rng(2);
  for (std::size_t n : {0u, 1u, 2u, 5u, 9u, 33u, 500u}) {
    auto a = random_vec(rng, n, 0.0, 10.0);
    if (n > 3) a[n / 2] = a[n - 1] = 11.0;  // tie: first index must win
    auto r1 = s.argmax(a), r2 = v.argmax(a);
    EXPECT_EQ(r1.index, r2.index);
    EXPECT_TRUE(same_bits(r1.value, r2.value));
    EXPECT_EQ(s.find_negative(a), v.find_negative(a));
    EXPECT_EQ(s.find_non_finite(a), v.find_non_finite(a));
    if (n > 2) {
      a[n - 2] = -0.5;
      a[n - 1] = std::numeric_limits<double>::infinity();
      EXPECT_EQ(s.find_negative(a), n - 2);
      EXPECT_EQ(v.find_negative(a), n - 2);
      EXPECT_EQ(v.find_non_finite(a), n - 1);
      a[0] = std::numeric_limits<double>::quiet_NaN();
      EXPECT_EQ(v.find_negative(a), 0u);
      EXPECT_EQ(v.find_non_finite(a), 0u);
    }
  }
}

TEST(EvalBatch, MatchesPointwiseOnEveryIsa) {
  std::vector<double> xs;
  for (int i = 0; i <= 101; ++i) xs.push_back(i * 0.0625);
  std::vector<sd::Isa> isas{sd::Isa::Scalar};
  if (sd::isa_available(sd::Isa::Avx2)) isas.push_back(sd::Isa::Avx2);
  const sd::Isa original = sd::active().isa;
  for (sd::Isa isa : isas) {
    sd::force_isa(isa);
    for (const Expr& e : fixtures::corpus()) {
      auto ys = eval_batch(e, xs);
      for (std::size_t i = 0; i < xs.size(); ++i)
        ASSERT_TRUE(same_bits(ys[i], eval(e, xs[i])))
            << print(e) << " at " << xs[i] << " isa " << sd::to_string(isa);
    }
  }
  sd::force_isa(original);
}

TEST(EvalBatch, RandomTreesMatchPointwise) {
  fixtures::TreeGen gen(9);
  std::vector<double> xs{0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
  int compared = 0;
  for (int i = 0; i < 300; ++i) {
    Expr e = gen.make(4);
    std::vector<double> ys;
    try {
      ys = eval_batch(e, xs);
    } catch (const EvalError&) {
      // Batch fails iff some point fails.
      bool any = false;
      for (double x : xs) {
        try {
          eval(e, x);
        } catch (const EvalError&) {
          any = true;
        }
      }
      EXPECT_TRUE(any) << print(e);
      continue;
    }
    for (std::size_t k = 0; k < xs.size(); ++k) ASSERT_TRUE(same_bits(ys[k], eval(e, xs[k])));
    ++compared;
  }
  EXPECT_GT(compared, 50);
}

TEST(EvalBatch, RejectsBadDomain) {
  std::vector<double> xs{1.0, -1.0};
  EXPECT_THROW(eval_batch(identity(), xs), EvalError);
  EXPECT_THROW(eval_batch(parse("compose(id(), id() - 2)"), std::vector<double>{1.0}),
               EvalError);
}

TEST(Dispatch, ForceUnavailableThrows) {
  if (sd::isa_available(sd::Isa::Avx2)) GTEST_SKIP();
  EXPECT_THROW(sd::force_isa(sd::Isa::Avx2), ArgumentError);
}
