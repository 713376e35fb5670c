#pragma once

// Jacobi θ₃(z|τ) = Σ_{n∈ℤ} exp((n²τ + 2nz)πi) for Im τ > 0.
//
// Evaluation always reduces z into the strip |Im z| <= Im τ/2, |Re z| <= 1/2
// with the lattice law θ₃(z + n + lτ) = θ₃(z) e^{-πiτl² - 2πilz} and sums a
// symmetric partial series on the reduced argument.

#include <complex>
#include <memory>
#include <span>

#include "torus_rh/error.hpp"
#include "torus_rh/simd/theta_kernels.hpp"

namespace torus_rh {

// Torus modulus τ with Im τ > 0.
class Modulus {
 public:
  explicit Modulus(cplx tau);

  cplx value() const noexcept { return tau_; }
  double imag() const noexcept { return tau_.imag(); }

 private:
  cplx tau_;
};

struct ThetaValue {
  cplx value;
  // Tail bound of the truncated series relative to |shift factor|, i.e. the
  // natural magnitude scale of θ₃ at z.
  double truncation_bound = 0.0;
};

struct ThetaOptions {
  double tolerance = 1e-13;
};

// Result of splitting z = z0 + n + lτ with z0 in the reduced strip.
struct ThetaReduction {
  cplx z0;
  long n = 0;
  long l = 0;
};

ThetaReduction reduce_theta_argument(cplx z, const Modulus& tau);

// θ₃ bound to one modulus. Immutable after construction and safe to share.
class Theta3 {
 public:
  explicit Theta3(Modulus tau, ThetaOptions options = {});

  const Modulus& modulus() const noexcept { return tau_; }
  double tail_bound() const noexcept { return table_.tail_bound; }
  int terms() const noexcept { return table_.terms(); }

  ThetaValue evaluate(cplx z) const;
  cplx operator()(cplx z) const { return evaluate(z).value; }

  // Batched form; runs the active SIMD kernel on the reduced arguments.
  void evaluate(std::span<const cplx> z, std::span<cplx> out) const;

 private:
  Modulus tau_;
  ThetaOptions options_;
  simd::SeriesTable table_;
};

ThetaValue theta3(cplx z, const Modulus& tau, ThetaOptions options = {});

// e^{-πiτl² - 2πilz}: θ₃(z + n + τl) = θ₃(z)·factor.
cplx theta3_shift_factor(cplx z, const Modulus& tau, long n, long l);

// |LHS - RHS| / (1 + |LHS|) for θ₃(z|τ)θ₃(z+½|τ) = θ₃(2z+½|2τ)θ₃(½|2τ).
double theta3_double_modulus_identity_residual(cplx z, const Modulus& tau);

}  // namespace torus_rh
