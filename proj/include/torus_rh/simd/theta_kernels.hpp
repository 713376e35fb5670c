#pragma once

// Inner series kernels for θ₃ on a reduced argument.
//
// For a reduced argument z0 (|Im z0| <= Im τ / 2) every kernel computes
//
//   S(z0) = 1 + Σ_{n=1..N} q_n (e^{2πinz0} + e^{-2πinz0}),   q_n = e^{iπτn²},
//
// with N taken from the series table. The scalar kernel is the reference:
// it evaluates every term independently with std::cos. The AVX2 kernel runs
// four arguments per register and builds e^{±2πinz0} by repeated complex
// rotation, so it is only ever compared against the scalar kernel, never
// against itself.

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace torus_rh::simd {

using cplx = std::complex<double>;

struct SeriesTable {
  cplx tau;
  std::vector<cplx> q;  // q[n-1] = exp(iπτn²), n = 1..N
  double tail_bound = 0.0;  // bound on the dropped terms for any reduced z0

  int terms() const noexcept { return static_cast<int>(q.size()); }
};

// Smallest N whose geometric tail majorant is <= tail_target. Throws
// Error(nonconvergent_modulus) when Im τ <= 0 or N would exceed max_terms.
SeriesTable make_series_table(cplx tau, double tail_target = 1e-17, int max_terms = 4096);

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

void theta_series_scalar(const SeriesTable& table, std::span<const cplx> z0, std::span<cplx> out);

#if defined(TORUS_RH_HAVE_AVX2_KERNEL)
void theta_series_avx2(const SeriesTable& table, std::span<const cplx> z0, std::span<cplx> out);
#endif

// True when the AVX2 kernel was compiled in and the running CPU has AVX2+FMA.
bool avx2_available() noexcept;

// Kernel used by theta_series(). Chosen once from the CPU, overridable by
// TORUS_RH_ISA=scalar|avx2 in the environment or by set_active_isa().
Isa active_isa() noexcept;
// Returns false (and changes nothing) when the requested kernel is unavailable.
bool set_active_isa(Isa isa) noexcept;

void theta_series(const SeriesTable& table, std::span<const cplx> z0, std::span<cplx> out);

}  // namespace torus_rh::simd
