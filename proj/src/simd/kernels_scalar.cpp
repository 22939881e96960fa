#include <algorithm>
#include <cmath>
#include <limits>

#include "altsum/simd.hpp"

namespace altsum::simd::detail {
namespace {

void add(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
}

void mul(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
}

void scale(double alpha, std::span<const double> a, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * a[i];
}

void accumulate_scaled(double c, std::span<const double> t, std::span<double> acc) {
  for (std::size_t i = 0; i < acc.size(); ++i) {
    double term = c * t[i];
    acc[i] = acc[i] + term;
  }
}

void floor_kernel(std::span<const double> a, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::floor(a[i]);
}

void fill(double c, std::span<double> out) { std::ranges::fill(out, c); }

void superadditive_gap(std::span<const double> fa, std::span<const double> fb,
                       std::span<const double> fsum, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (fa[i] + fb[i]) - fsum[i];
}

void midpoint_gap(std::span<const double> fmid, std::span<const double> fx,
                  std::span<const double> fy, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fmid[i] - 0.5 * (fx[i] + fy[i]);
}

void mask_within_tolerance(double rel, std::span<const double> fa, std::span<const double> fb,
                           std::span<double> gap) {
  constexpr double kMasked = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gap.size(); ++i) {
    double scale = std::max(1.0, std::max(std::fabs(fa[i]), std::fabs(fb[i])));
    double tol = rel * scale;
    if (!(gap[i] > tol)) gap[i] = kMasked;
  }
}

ArgMax argmax(std::span<const double> a) {
  ArgMax best{0, -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > best.value) best = {i, a[i]};
  }
  return best;
}

std::size_t find_non_finite(std::span<const double> a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a[i])) return i;
  return a.size();
}

std::size_t find_negative(std::span<const double> a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] >= 0.0)) return i;
  return a.size();
}

constexpr KernelTable kScalar{
    Isa::Scalar,       add,          mul,          scale,   accumulate_scaled,
    floor_kernel,      fill,         superadditive_gap,     midpoint_gap,
    mask_within_tolerance, argmax,   find_non_finite,       find_negative,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace altsum::simd::detail
