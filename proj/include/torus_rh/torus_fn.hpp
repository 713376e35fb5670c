#pragma once

// Quasiperiodic meromorphic functions on ℂ/(ℤ+τℤ):
//
//   E(z+1) = E(z),   E(z+τ) = E(z) e^{2πiΛ̃},
//
// represented as finite sums of θ₃ quotients
//
//   coef · Π_j θ₃(z - α_j|τ) / Π_j θ₃(z - β_j|τ),   Σα - Σβ = Λ̃ (mod ℤ).
//
// θ₃(z - α) vanishes at z = α + K with K = (1+τ)/2, so a zero at z_j is
// written α_j = z_j + K (and likewise for poles).

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "torus_rh/surface.hpp"
#include "torus_rh/theta.hpp"

namespace torus_rh {

class PhaseParam {
 public:
  explicit PhaseParam(double lambda_tilde);

  double value() const noexcept { return value_; }
  // Λ̃ mod 1 in [0, 1).
  double reduced() const noexcept { return reduced_; }
  bool is_integer(double tol = 1e-12) const noexcept;
  bool is_half_integer(double tol = 1e-12) const noexcept;

 private:
  double value_;
  double reduced_;
};

struct DivisorPoint {
  cplx z;
  int multiplicity = 1;
};

struct Divisor {
  std::vector<DivisorPoint> zeros;
  std::vector<DivisorPoint> poles;

  int zero_count() const noexcept;
  int pole_count() const noexcept;
  // Σ zeros - Σ poles with multiplicity.
  cplx abel_sum() const noexcept;
};

enum class Symmetry { symmetric, anti_symmetric, none };

const char* to_string(Symmetry s) noexcept;

// Riemann constant K = (1+τ)/2.
cplx riemann_constant(const TorusPeriods& periods) noexcept;

struct ThetaQuotient {
  cplx coef;
  std::vector<cplx> alpha;  // numerator shifts
  std::vector<cplx> beta;   // denominator shifts
};

struct QuasiValue {
  cplx value;
  // Within 1e-6 of a pole (lattice distance); value is then not meaningful.
  bool near_pole = false;
};

// Immutable after construction; evaluation is reentrant.
class QuasiFn {
 public:
  QuasiFn(std::shared_ptr<const Theta3> theta, PhaseParam lambda, std::vector<ThetaQuotient> terms,
          std::optional<Divisor> divisor, Symmetry symmetry);

  QuasiValue evaluate(cplx z) const;
  // Throws Error(pole_proximity) within 1e-6 of a pole.
  cplx operator()(cplx z) const;
  void evaluate(std::span<const cplx> z, std::span<cplx> out) const;

  const PhaseParam& lambda() const noexcept { return lambda_; }
  cplx tau() const noexcept { return theta_->modulus().value(); }
  const std::optional<Divisor>& divisor() const noexcept { return divisor_; }
  Symmetry symmetry() const noexcept { return symmetry_; }
  // Leading coefficient of the first term (the free constant E₀).
  cplx normalization() const noexcept { return terms_.front().coef; }
  const std::vector<ThetaQuotient>& terms() const noexcept { return terms_; }
  const std::shared_ptr<const Theta3>& theta() const noexcept { return theta_; }

  // Lattice distance from z to the nearest possible pole of any term.
  double pole_distance(cplx z) const;

  QuasiFn scaled(cplx s) const;
  // Sum of two functions over the same torus and phase; throws invalid_argument otherwise.
  QuasiFn plus(const QuasiFn& other) const;
  QuasiFn with_symmetry(Symmetry s) const;

 private:
  cplx term_value(const ThetaQuotient& t, cplx z) const;

  std::shared_ptr<const Theta3> theta_;
  PhaseParam lambda_;
  std::vector<ThetaQuotient> terms_;
  std::optional<Divisor> divisor_;
  Symmetry symmetry_;
};

QuasiFn build_from_divisor(const Divisor& d, PhaseParam lam, const TorusPeriods& periods, cplx e0 = 1.0);

QuasiFn canonical_symmetric(PhaseParam lam, const TorusPeriods& periods);
// θ₃(2z - Λ̃ + 1/2|2τ) / θ₃(2z + 1/2|2τ): the single-quotient form of E_s.
cplx canonical_symmetric_compact(cplx z, PhaseParam lam, const TorusPeriods& periods);
QuasiFn canonical_antisymmetric(PhaseParam lam, const TorusPeriods& periods);
// Ê_a: anti-symmetric, poles at ±1/4 + τ/2.
QuasiFn canonical_antisymmetric_origin_pole(PhaseParam lam, const TorusPeriods& periods);

// Poles {p1, p1+1/2}; zeros z₁ = p1 + Λ̃/2 + nτ/2, z₂ = z₁ + 1/2 - nτ.
QuasiFn build_symmetric_pair(cplx p1, int parity, PhaseParam lam, const TorusPeriods& periods);

Symmetry classify_symmetry(const QuasiFn& e);

struct Decomposition {
  cplx c_s;
  cplx c_a;
  double residual = 0.0;
};

// e = c_s E_s + c_a E_a; throws Error(pole_mismatch) when that fails.
Decomposition decompose(const QuasiFn& e, PhaseParam lam, const TorusPeriods& periods);

// max over the sample points of |E(z+τ) - e^{2πiΛ̃}E(z)| + |E(z+1) - E(z)|, relative to 1+|E(z)|.
double quasi_periodicity_residual(const QuasiFn& e, std::span<const cplx> points);

// Argument-principle quantities over the cell with lower-left corner `base`:
// winding number (1/2πi)∮E'/E and first moment (1/2πi)∮zE'/E = Σz - Σp.
struct CellCount {
  double winding = 0.0;
  cplx moment;
};

CellCount argument_principle(const QuasiFn& e, cplx base);
// Corner for which the cell boundary stays clear of the known divisor.
cplx choose_cell_base(const QuasiFn& e);

// Deterministic points of the cell at least `min_pole_distance` from any pole.
std::vector<cplx> regular_points(const QuasiFn& e, int count, unsigned seed, double min_pole_distance = 0.05);

}  // namespace torus_rh
