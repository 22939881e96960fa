#pragma once

// Data-parallel kernels behind batched evaluation and grid testing.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected at runtime. All variants perform the same IEEE operations
// in the same order per element (no FMA contraction, no reassociation), so
// their outputs are bit-identical; the test suite checks this.

#include <cstddef>
#include <span>
#include <string_view>

namespace altsum::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct ArgMax {
  std::size_t index;  // first index holding the maximum; 0 for empty input
  double value;       // -inf for empty input
};

struct KernelTable {
  Isa isa;

  // out[i] = a[i] + b[i]
  void (*add)(std::span<const double> a, std::span<const double> b, std::span<double> out);
  // out[i] = a[i] * b[i]
  void (*mul)(std::span<const double> a, std::span<const double> b, std::span<double> out);
  // out[i] = alpha * a[i]
  void (*scale)(double alpha, std::span<const double> a, std::span<double> out);
  // acc[i] = acc[i] + c * t[i]
  void (*accumulate_scaled)(double c, std::span<const double> t, std::span<double> acc);
  // out[i] = floor(a[i])
  void (*floor)(std::span<const double> a, std::span<double> out);
  // out[i] = c
  void (*fill)(double c, std::span<double> out);

  // out[i] = (fa[i] + fb[i]) - fsum[i]; positive means superadditivity fails.
  void (*superadditive_gap)(std::span<const double> fa, std::span<const double> fb,
                            std::span<const double> fsum, std::span<double> out);
  // out[i] = fmid[i] - 0.5 * (fx[i] + fy[i]); positive means midpoint convexity fails.
  void (*midpoint_gap)(std::span<const double> fmid, std::span<const double> fx,
                       std::span<const double> fy, std::span<double> out);
  // gap[i] kept if gap[i] > rel * max(1, |fa[i]|, |fb[i]|), else set to -inf.
  void (*mask_within_tolerance)(double rel, std::span<const double> fa,
                                std::span<const double> fb, std::span<double> gap);

  ArgMax (*argmax)(std::span<const double> a);
  // Index of the first NaN/inf entry, or a.size().
  std::size_t (*find_non_finite)(std::span<const double> a);
  // Index of the first entry that is not >= 0 (negative or NaN), or a.size().
  std::size_t (*find_negative)(std::span<const double> a);
};

/// Best ISA supported by this CPU and build.
Isa detected_isa();
bool isa_available(Isa isa);

/// Kernels currently used by the library (detected ISA unless overridden by
/// force_isa() or the ALTSUM_ISA environment variable: "scalar" or "avx2").
const KernelTable& active();

/// Kernels for a specific ISA. Throws ArgumentError if unavailable.
const KernelTable& table(Isa isa);

/// Overrides the active ISA for the whole process. Throws if unavailable.
void force_isa(Isa isa);

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
}  // namespace detail

}  // namespace altsum::simd
