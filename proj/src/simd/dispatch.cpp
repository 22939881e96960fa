#include <atomic>
#include <cstdlib>
#include <string>

#include "altsum/error.hpp"
#include "altsum/simd.hpp"

namespace altsum::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "?";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
      return detail::avx2_table() != nullptr && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() { return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar; }

const KernelTable& table(Isa isa) {
  if (!isa_available(isa))
    throw ArgumentError("SIMD backend '" + std::string(to_string(isa)) + "' is not available");
  return isa == Isa::Avx2 ? *detail::avx2_table() : detail::scalar_table();
}

namespace {

const KernelTable* initial_table() {
  if (const char* env = std::getenv("ALTSUM_ISA")) {
    std::string_view v(env);
    if (v == "scalar") return &detail::scalar_table();
    if (v == "avx2" && isa_available(Isa::Avx2)) return detail::avx2_table();
  }
  return &table(detected_isa());
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

void force_isa(Isa isa) { active_slot().store(&table(isa), std::memory_order_release); }

}  // namespace altsum::simd
