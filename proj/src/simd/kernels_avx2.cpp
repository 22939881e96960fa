// Compiled with -mavx2 (no -mfma). Only reached after a runtime CPU check.

#include "altsum/simd.hpp"

#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

#include <bit>
#include <cmath>
#include <limits>

namespace altsum::simd::detail {
namespace {

constexpr std::size_t kLanes = 4;

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void add(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(&out[i], _mm256_add_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i])));
  }
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void mul(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(&out[i], _mm256_mul_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i])));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(double alpha, std::span<const double> a, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(&out[i], _mm256_mul_pd(va, _mm256_loadu_pd(&a[i])));
  }
  for (; i < n; ++i) out[i] = alpha * a[i];
}

void accumulate_scaled(double c, std::span<const double> t, std::span<double> acc) {
  const std::size_t n = acc.size();
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d term = _mm256_mul_pd(vc, _mm256_loadu_pd(&t[i]));
    _mm256_storeu_pd(&acc[i], _mm256_add_pd(_mm256_loadu_pd(&acc[i]), term));
  }
  for (; i < n; ++i) {
    double term = c * t[i];
    acc[i] = acc[i] + term;
  }
}

void floor_kernel(std::span<const double> a, std::span<double> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(&out[i], _mm256_round_pd(_mm256_loadu_pd(&a[i]),
                                               _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC));
  }
  for (; i < n; ++i) out[i] = std::floor(a[i]);
}

void fill(double c, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) _mm256_storeu_pd(&out[i], vc);
  for (; i < n; ++i) out[i] = c;
}

void superadditive_gap(std::span<const double> fa, std::span<const double> fb,
                       std::span<const double> fsum, std::span<double> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d s = _mm256_add_pd(_mm256_loadu_pd(&fa[i]), _mm256_loadu_pd(&fb[i]));
    _mm256_storeu_pd(&out[i], _mm256_sub_pd(s, _mm256_loadu_pd(&fsum[i])));
  }
  for (; i < n; ++i) out[i] = (fa[i] + fb[i]) - fsum[i];
}

void midpoint_gap(std::span<const double> fmid, std::span<const double> fx,
                  std::span<const double> fy, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d s = _mm256_add_pd(_mm256_loadu_pd(&fx[i]), _mm256_loadu_pd(&fy[i]));
    _mm256_storeu_pd(&out[i], _mm256_sub_pd(_mm256_loadu_pd(&fmid[i]), _mm256_mul_pd(half, s)));
  }
  for (; i < n; ++i) out[i] = fmid[i] - 0.5 * (fx[i] + fy[i]);
}

void mask_within_tolerance(double rel, std::span<const double> fa, std::span<const double> fb,
                           std::span<double> gap) {
  constexpr double kMasked = -std::numeric_limits<double>::infinity();
  const std::size_t n = gap.size();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d vrel = _mm256_set1_pd(rel);
  const __m256d masked = _mm256_set1_pd(kMasked);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d m = _mm256_max_pd(abs_pd(_mm256_loadu_pd(&fa[i])), abs_pd(_mm256_loadu_pd(&fb[i])));
    __m256d tol = _mm256_mul_pd(vrel, _mm256_max_pd(m, one));
    __m256d g = _mm256_loadu_pd(&gap[i]);
    __m256d keep = _mm256_cmp_pd(g, tol, _CMP_GT_OQ);
    _mm256_storeu_pd(&gap[i], _mm256_blendv_pd(masked, g, keep));
  }
  for (; i < n; ++i) {
    double m = std::fabs(fa[i]) > std::fabs(fb[i]) ? std::fabs(fa[i]) : std::fabs(fb[i]);
    double tol = rel * (m > 1.0 ? m : 1.0);
    if (!(gap[i] > tol)) gap[i] = kMasked;
  }
}

ArgMax argmax(std::span<const double> a) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const std::size_t n = a.size();
  __m256d vmax = _mm256_set1_pd(kNegInf);
  std::size_t i = 0;
  // max_pd returns the second operand when the first is NaN, so NaNs are skipped.
  for (; i + kLanes <= n; i += kLanes) vmax = _mm256_max_pd(_mm256_loadu_pd(&a[i]), vmax);
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, vmax);
  double best = kNegInf;
  for (double v : lanes) best = v > best ? v : best;
  for (; i < n; ++i) best = a[i] > best ? a[i] : best;
  if (best == kNegInf) return {0, kNegInf};
  for (std::size_t j = 0; j < n; ++j)
    if (a[j] == best) return {j, a[j]};
  return {0, kNegInf};
}

std::size_t find_non_finite(std::span<const double> a) {
  const std::size_t n = a.size();
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d finite = _mm256_cmp_pd(abs_pd(_mm256_loadu_pd(&a[i])), inf, _CMP_LT_OQ);
    int bad = ~_mm256_movemask_pd(finite) & 0xF;
    if (bad) return i + static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(bad)));
  }
  for (; i < n; ++i)
    if (!std::isfinite(a[i])) return i;
  return n;
}

std::size_t find_negative(std::span<const double> a) {
  const std::size_t n = a.size();
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d ok = _mm256_cmp_pd(_mm256_loadu_pd(&a[i]), zero, _CMP_GE_OQ);
    int bad = ~_mm256_movemask_pd(ok) & 0xF;
    if (bad) return i + static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(bad)));
  }
  for (; i < n; ++i)
    if (!(a[i] >= 0.0)) return i;
  return n;
}

constexpr KernelTable kAvx2{
    Isa::Avx2,         add,          mul,          scale,   accumulate_scaled,
    floor_kernel,      fill,         superadditive_gap,     midpoint_gap,
    mask_within_tolerance, argmax,   find_non_finite,       find_negative,
};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace altsum::simd::detail

#else

namespace altsum::simd::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace altsum::simd::detail

#endif
