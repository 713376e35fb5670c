#include <atomic>
#include <cstdlib>
#include <string_view>

#include "torus_rh/simd/theta_kernels.hpp"

namespace torus_rh::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(TORUS_RH_HAVE_AVX2_KERNEL) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  const bool has_avx2 = cpu_has_avx2();
  if (const char* env = std::getenv("TORUS_RH_ISA")) {
    const std::string_view want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && has_avx2) return Isa::avx2;
  }
  return has_avx2 ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& isa_slot() noexcept {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

}  // namespace

bool avx2_available() noexcept {
  static const bool available = cpu_has_avx2();
  return available;
}

Isa active_isa() noexcept { return isa_slot().load(std::memory_order_relaxed); }

bool set_active_isa(Isa isa) noexcept {
  if (isa == Isa::avx2 && !avx2_available()) return false;
  isa_slot().store(isa, std::memory_order_relaxed);
  return true;
}

void theta_series(const SeriesTable& table, std::span<const cplx> z0, std::span<cplx> out) {
#if defined(TORUS_RH_HAVE_AVX2_KERNEL)
  if (active_isa() == Isa::avx2) {
    theta_series_avx2(table, z0, out);
    return;
  }
#endif
  theta_series_scalar(table, z0, out);
}

}  // namespace torus_rh::simd
