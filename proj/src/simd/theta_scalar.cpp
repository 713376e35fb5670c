#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "torus_rh/error.hpp"
#include "torus_rh/simd/theta_kernels.hpp"

namespace torus_rh::simd {

namespace {
constexpr double pi = std::numbers::pi;
}

SeriesTable make_series_table(cplx tau, double tail_target, int max_terms) {
  const double t = tau.imag();
  if (!(t > 0.0) || !std::isfinite(t) || !std::isfinite(tau.real())) {
    throw Error(ErrorKind::nonconvergent_modulus, "Im(tau) must be positive and finite");
  }
  // For |Im z0| <= t/2 every term obeys |q_n e^{±2πinz0}| <= exp(-πt n(n-1)),
  // and consecutive majorants shrink by at least exp(-2πt(N+1)) past N.
  auto tail = [t](int n_last) {
    const double np1 = n_last + 1.0;
    const double lead = std::exp(-pi * t * np1 * n_last);
    return 2.0 * lead / (1.0 - std::exp(-2.0 * pi * t * np1));
  };
  int terms = 1;
  while (tail(terms) > tail_target) {
    if (++terms > max_terms) {
      throw Error(ErrorKind::nonconvergent_modulus,
                  "theta series needs more than " + std::to_string(max_terms) + " terms");
    }
  }
  SeriesTable table;
  table.tau = tau;
  table.tail_bound = tail(terms);
  table.q.reserve(terms);
  const cplx i_pi_tau = cplx(0.0, pi) * tau;
  for (int n = 1; n <= terms; ++n) {
    table.q.push_back(std::exp(i_pi_tau * static_cast<double>(n) * static_cast<double>(n)));
  }
  return table;
}

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

void theta_series_scalar(const SeriesTable& table, std::span<const cplx> z0, std::span<cplx> out) {
  const int terms = table.terms();
  for (std::size_t i = 0; i < z0.size(); ++i) {
    const cplx two_pi_z = 2.0 * pi * z0[i];
    cplx acc = 0.0;
    for (int n = terms; n >= 1; --n) {
      acc += table.q[n - 1] * std::cos(static_cast<double>(n) * two_pi_z);
    }
    out[i] = 1.0 + 2.0 * acc;
  }
}

}  // namespace torus_rh::simd
