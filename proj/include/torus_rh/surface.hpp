#pragma once

// The genus-one surface X of w(k)² = (k²+c²)(k²+a²) with cuts [ia, ic] and
// [-ic, -ia], its periods, and the Abel map A(p) = ∫_{ic}^p dω.
//
// Branches are never delegated to a library principal value alone. Both
// w and γ̃ are written through the Möbius variables
//
//   u₊ = (k - ia)/(k - ic),   u₋ = (k + ia)/(k + ic),
//
// which send exactly one cut each onto (-∞, 0]; principal roots of u± then
// carry the cuts where they belong, and the anchors w(0) > 0, γ̃ > 0 on
// [ic, i∞) come out of the algebra. On a cut the side of approach is
// encoded in the sign of a zero imaginary part of u±.
//
// Contour orientation is ic → -ic. Side::plus is the left side of that
// orientation, i.e. the limit from Re k > 0.

#include <complex>
#include <optional>
#include <variant>

#include "torus_rh/error.hpp"

namespace torus_rh {

enum class Sheet { upper, lower };
enum class Side { plus, minus };

constexpr Side opposite(Side s) noexcept { return s == Side::plus ? Side::minus : Side::plus; }
constexpr double sign_of(Side s) noexcept { return s == Side::plus ? 1.0 : -1.0; }
constexpr double sign_of(Sheet s) noexcept { return s == Sheet::upper ? 1.0 : -1.0; }

class GapSpec {
 public:
  // Throws Error(invalid_argument) unless 0 < a < c.
  GapSpec(double a, double c);

  double a() const noexcept { return a_; }
  double c() const noexcept { return c_; }

 private:
  double a_;
  double c_;
};

// A point k with a sheet tag, off the open cuts.
struct SheetPoint {
  cplx k;
  Sheet sheet = Sheet::upper;
};

// One-sided limit at a point of the contour [ic, -ic].
struct BoundaryPoint {
  cplx k;
  Side side = Side::plus;
  Sheet sheet = Sheet::upper;
};

struct InfinityPoint {
  Sheet sheet = Sheet::upper;
};

using SurfacePoint = std::variant<SheetPoint, BoundaryPoint, InfinityPoint>;

enum class Segment { upper_cut, middle, lower_cut };

// Which piece of [ic, -ic] a contour point lies on; throws off_contour.
Segment contour_segment(double im_k, const GapSpec& g);
// Builds a validated boundary point at k = iy; throws off_contour.
BoundaryPoint boundary_point(double y, Side side, const GapSpec& g, Sheet sheet = Sheet::upper);
// Point k = -p.k; the side flips because k ↦ -k swaps the half-planes.
BoundaryPoint negate(const BoundaryPoint& p) noexcept;

// True when k sits on the closed segment [ic, -ic] up to a tiny tolerance.
bool on_contour(cplx k, const GapSpec& g) noexcept;
// Distance from k to the nearest of ±ia, ±ic.
double distance_to_branch_points(cplx k, const GapSpec& g) noexcept;

// Upper-sheet value unless the point says otherwise. Throws
// branch_point_eval at ±ia, ±ic, and path_violation for a SheetPoint lying
// on an open cut (a side tag is needed there).
cplx w_eval(const SheetPoint& p, const GapSpec& g);
cplx w_eval(const BoundaryPoint& p, const GapSpec& g);

// ((k²+a²)/(k²+c²))^{1/4}, cuts [±ia, ±ic], positive on [ic, i∞) and on ℝ.
cplx gamma_tilde(cplx k, const GapSpec& g);
cplx gamma_tilde(const BoundaryPoint& p, const GapSpec& g);

// √(k²+a²) with its cut on [-ia, ia] and ~k at infinity.
cplx root_middle(cplx k, const GapSpec& g);

// w(ζ)/ζ², finite at ζ = ∞ (value 1); used for integration to infinity.
cplx w_over_k2(cplx k, const GapSpec& g);

struct TorusPeriods {
  cplx gamma;  // Γ = (∮_a dζ/w)^{-1}
  cplx tau;    // τ = Γ ∮_b dζ/w
  double gamma_error = 0.0;
  double tau_error = 0.0;
};

struct PeriodOptions {
  double quad_tol = 1e-13;
};

// Throws quadrature_failure if the requested tolerance is not met.
TorusPeriods compute_periods(const GapSpec& g, PeriodOptions opt = {});

// ∮_a dζ/w along an independent route: the two half-circles |ζ| = c from
// ic to -ic, one through Re ζ > 0 and one through Re ζ < 0.
cplx a_period_via_circle(const GapSpec& g);

// Canonical representative in [0,1) × [0, Im τ) of ℂ/(ℤ+τℤ).
struct AbelValue {
  cplx z;
};

AbelValue lattice_reduce(cplx z, const TorusPeriods& periods);
// Distance of z to the nearest lattice point m + lτ.
double lattice_distance(cplx z, cplx tau);
// Distance of z to the nearest integer (only the real lattice ℤ).
double integer_distance(cplx z);

// A(p) = ∫_{ic}^{p} Γ dζ/w with the path kept off [ic, -ic]. raw() returns the
// holomorphic branch on ℂ∖[ic,-ic] (not reduced); lower-sheet points use
// A(p*) = -A(p).
class AbelMap {
 public:
  AbelMap(GapSpec g, TorusPeriods periods, PeriodOptions opt = {});

  const GapSpec& gap() const noexcept { return gap_; }
  const TorusPeriods& periods() const noexcept { return periods_; }
  cplx at_infinity() const noexcept { return a_inf_; }

  // Upper-sheet value at an off-contour k; throws path_violation on [ic,-ic].
  cplx raw(cplx k) const;
  cplx raw(const SheetPoint& p) const;
  cplx raw(const BoundaryPoint& p) const;
  cplx raw(const InfinityPoint& p) const;
  cplx raw(const SurfacePoint& p) const;

  AbelValue operator()(const SurfacePoint& p) const { return lattice_reduce(raw(p), periods_); }

 private:
  // ∫_k^∞ dζ/w(ζ) from an upper-sheet start point.
  cplx tail_integral(cplx k, std::optional<Side> side) const;

  GapSpec gap_;
  TorusPeriods periods_;
  PeriodOptions opt_;
  cplx a_inf_;
};

AbelValue abel_map(const SurfacePoint& p, const GapSpec& g, const TorusPeriods& periods);

}  // namespace torus_rh
