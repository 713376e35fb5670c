#pragma once

// The model RH problem with contour [ic, -ic] (oriented downward) and jump
//
//   v = ((0, i), (i, 0))                  on [ic, ia],
//   v = diag(e^{-2πiΛ̃}, e^{2πiΛ̃})        on [ia, -ia],
//   v = ((0, -i), (-i, 0))                on [-ia, -ic],
//
// its vector solution m and the matrix solutions M1, M2, M3, all assembled
// from γ̃, the Abel map and the canonical quasiperiodic functions.

#include <array>
#include <memory>
#include <variant>

#include "torus_rh/surface.hpp"
#include "torus_rh/torus_fn.hpp"

namespace torus_rh {

using Vec2 = std::array<cplx, 2>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;

Mat2 sigma1() noexcept;
Mat2 sigma3() noexcept;
Mat2 identity2() noexcept;
Mat2 mul(const Mat2& x, const Mat2& y) noexcept;
Vec2 mul(const Vec2& x, const Mat2& y) noexcept;
Mat2 inverse(const Mat2& x);
cplx det(const Mat2& x) noexcept;
double norm(const Mat2& x) noexcept;  // Frobenius
double norm(const Vec2& x) noexcept;
Mat2 sub(const Mat2& x, const Mat2& y) noexcept;
Vec2 sub(const Vec2& x, const Vec2& y) noexcept;

struct JumpMatrix {
  Segment segment;
  Mat2 matrix;
};

// Throws Error(off_contour) unless k is on [ic, -ic].
JumpMatrix jump_matrix(const BoundaryPoint& k, const GapSpec& g, PhaseParam lam);

// Evaluation point: off-contour k or a one-sided contour point.
using KPoint = std::variant<cplx, BoundaryPoint>;

KPoint negate(const KPoint& p);
cplx base_of(const KPoint& p) noexcept;

// Everything about a point that does not depend on Λ̃. A(-k) is computed by
// its own quadrature, so that symmetry checks are not tautological.
struct PreparedPoint {
  KPoint point;
  cplx k;
  cplx gamma;        // γ̃(k)
  cplx abel;         // raw upper-sheet A(k)
  cplx abel_neg;     // raw upper-sheet A(-k)
  cplx gamma_neg;    // γ̃(-k)
};

// Surface data shared by every phase: gap, periods, Abel map.
class SurfaceContext {
 public:
  explicit SurfaceContext(GapSpec g, PeriodOptions opt = {});

  const GapSpec& gap() const noexcept { return gap_; }
  const TorusPeriods& periods() const noexcept { return periods_; }
  const AbelMap& abel() const noexcept { return abel_; }

  // Throws Error(singular_set_eval) within 1e-8·c of ±ia, ±ic.
  PreparedPoint prepare(const KPoint& p) const;

 private:
  GapSpec gap_;
  TorusPeriods periods_;
  AbelMap abel_;
};

enum class NKind { sym, anti, anti_origin };

class ModelSolutions {
 public:
  ModelSolutions(std::shared_ptr<const SurfaceContext> ctx, PhaseParam lam);

  const SurfaceContext& context() const noexcept { return *ctx_; }
  const std::shared_ptr<const SurfaceContext>& context_ptr() const noexcept { return ctx_; }
  const PhaseParam& lambda() const noexcept { return lam_; }
  const QuasiFn& e_s() const noexcept { return es_; }
  const QuasiFn& e_a() const noexcept { return ea_; }
  const QuasiFn& e_a_hat() const noexcept { return eah_; }

  // N(∞₊) for each kind: E(A(∞₊)).
  cplx n_infinity(NKind kind) const;
  // E_kind(A(p)), lower sheet through A(p*) = -A(p).
  cplx n_value(NKind kind, const SheetPoint& p) const;
  cplx n_value(NKind kind, const BoundaryPoint& p) const;

  Vec2 m(const PreparedPoint& p) const;
  Mat2 m1(const PreparedPoint& p) const;
  Mat2 m2(const PreparedPoint& p) const;
  // Throws Error(undefined_phase) for Λ̃ ∈ ℤ and singular_set_eval near k = 0.
  Mat2 m3(const PreparedPoint& p) const;
  // (1,1)M1/(N_s(∞₊)N_a(∞₊)); near Λ̃ = 1/2 (mod 1) the 0/0 limit is taken by a
  // central difference in Λ̃ with step 1e-5.
  Vec2 m_from_m1(const PreparedPoint& p) const;
  // m(k)/k, a solution of the vanishing problem.
  Vec2 witness(const PreparedPoint& p) const;
  // γ̃(k)(N̂_a(k,+), N̂_a(k,-)), unnormalized; singular_set_eval near k = 0.
  Vec2 origin_solution(const PreparedPoint& p) const;

  Vec2 m(const KPoint& k) const { return m(ctx_->prepare(k)); }
  Mat2 m1(const KPoint& k) const { return m1(ctx_->prepare(k)); }
  Mat2 m2(const KPoint& k) const { return m2(ctx_->prepare(k)); }
  Mat2 m3(const KPoint& k) const { return m3(ctx_->prepare(k)); }

 private:
  // N on the upper and lower sheet at p.
  Vec2 n_pair(const QuasiFn& e, const PreparedPoint& p) const;
  void guard_origin(const PreparedPoint& p) const;

  std::shared_ptr<const SurfaceContext> ctx_;
  PhaseParam lam_;
  QuasiFn es_;
  QuasiFn ea_;
  QuasiFn eah_;
  cplx ns_inf_;
  cplx na_inf_;
  cplx nah_inf_;
};

}  // namespace torus_rh
