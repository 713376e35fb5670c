#include <immintrin.h>

#include <array>
#include <cmath>
#include <numbers>

#include "torus_rh/simd/theta_kernels.hpp"

namespace torus_rh::simd {

namespace {

struct Complex4 {
  __m256d re;
  __m256d im;
};

inline Complex4 mul(Complex4 a, Complex4 b) {
  return {_mm256_fmsub_pd(a.re, b.re, _mm256_mul_pd(a.im, b.im)),
          _mm256_fmadd_pd(a.re, b.im, _mm256_mul_pd(a.im, b.re))};
}

// acc + q * s with q broadcast across lanes.
inline Complex4 fma_scalar(Complex4 acc, cplx q, Complex4 s) {
  const __m256d qr = _mm256_set1_pd(q.real());
  const __m256d qi = _mm256_set1_pd(q.imag());
  const __m256d re = _mm256_fnmadd_pd(qi, s.im, _mm256_fmadd_pd(qr, s.re, acc.re));
  const __m256d im = _mm256_fmadd_pd(qi, s.re, _mm256_fmadd_pd(qr, s.im, acc.im));
  return {re, im};
}

}  // namespace

void theta_series_avx2(const SeriesTable& table, std::span<const cplx> z0, std::span<cplx> out) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const int terms = table.terms();
  const std::size_t count = z0.size();

  for (std::size_t base = 0; base < count; base += 4) {
    const std::size_t lanes = std::min<std::size_t>(4, count - base);
    alignas(32) std::array<double, 4> ur{}, ui{}, vr{}, vi{};
    for (std::size_t j = 0; j < 4; ++j) {
      const cplx z = j < lanes ? z0[base + j] : cplx(0.0, 0.0);
      const double grow = std::exp(-two_pi * z.imag());
      const double c = std::cos(two_pi * z.real());
      const double s = std::sin(two_pi * z.real());
      ur[j] = grow * c;
      ui[j] = grow * s;
      vr[j] = c / grow;
      vi[j] = -s / grow;
    }
    const Complex4 u{_mm256_load_pd(ur.data()), _mm256_load_pd(ui.data())};
    const Complex4 v{_mm256_load_pd(vr.data()), _mm256_load_pd(vi.data())};

    Complex4 p = u;  // e^{2πinz}
    Complex4 r = v;  // e^{-2πinz}
    Complex4 acc{_mm256_set1_pd(1.0), _mm256_setzero_pd()};
    for (int n = 1; n <= terms; ++n) {
      if (n > 1) {
        p = mul(p, u);
        r = mul(r, v);
      }
      const Complex4 sum{_mm256_add_pd(p.re, r.re), _mm256_add_pd(p.im, r.im)};
      acc = fma_scalar(acc, table.q[n - 1], sum);
    }

    alignas(32) std::array<double, 4> out_re{}, out_im{};
    _mm256_store_pd(out_re.data(), acc.re);
    _mm256_store_pd(out_im.data(), acc.im);
    for (std::size_t j = 0; j < lanes; ++j) {
      out[base + j] = cplx(out_re[j], out_im[j]);
    }
  }
}

}  // namespace torus_rh::simd
