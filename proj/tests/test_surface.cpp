#include <doctest.h>

#include <cmath>
#include <random>

#include "torus_rh/surface.hpp"

using namespace torus_rh;

namespace {

constexpr cplx I(0.0, 1.0);

const GapSpec& gap12() {
  static const GapSpec g(1.0, 2.0);
  return g;
}

const TorusPeriods& per12() {
  static const TorusPeriods p = compute_periods(gap12());
  return p;
}

const AbelMap& abel12() {
  static const AbelMap a(gap12(), per12());
  return a;
}

}  // namespace

TEST_CASE("band edges must be ordered") {
  CHECK_THROWS_AS(GapSpec(2.0, 1.0), Error);
  CHECK_THROWS_AS(GapSpec(0.0, 1.0), Error);
  CHECK_THROWS_AS(GapSpec(1.0, 1.0), Error);
}

TEST_CASE("periods match the complete elliptic integral values") {
  // Γ = ic/(4K(a/c)), τ = iK'/(2K) at 30 digits.
  CHECK(std::abs(per12().gamma - cplx(0.0, 0.296603823082442554280333614044)) < 1e-13);
  CHECK(std::abs(per12().tau - cplx(0.0, 0.639630785585503233092578214323)) < 1e-13);
  CHECK(per12().gamma_error < 1e-12);
  for (auto [a, c] : {std::pair{0.3, 5.0}, std::pair{0.9, 1.0}, std::pair{2.0, 7.0}}) {
    const double k = a / c;
    const double K = std::comp_ellint_1(k);
    const TorusPeriods p = compute_periods(GapSpec(a, c));
    CHECK(std::abs(p.gamma - I * c / (4.0 * K)) < 1e-12 * std::abs(p.gamma));
    CHECK(std::abs(p.tau - I * std::comp_ellint_1(std::sqrt(1.0 - k * k)) / (2.0 * K)) < 1e-12);
  }
}

TEST_CASE("a-period along the circle route normalizes to one") {
  CHECK(std::abs(per12().gamma * a_period_via_circle(gap12()) - 1.0) < 1e-11);
}

TEST_CASE("periods under scaling") {
  const TorusPeriods p = compute_periods(GapSpec(3.7, 7.4));
  CHECK(std::abs(p.tau - per12().tau) < 1e-12);
  CHECK(std::abs(p.gamma - 3.7 * per12().gamma) < 1e-12);
}

TEST_CASE("Abel map special values") {
  const AbelMap& A = abel12();
  const cplx tau = per12().tau;
  CHECK(std::abs(A.at_infinity() - 0.25) < 1e-12);
  CHECK(std::abs(A.raw(InfinityPoint{Sheet::lower}) + 0.25) < 1e-12);
  CHECK(lattice_distance(A.raw(BoundaryPoint{2.0 * I, Side::plus}), tau) < 1e-12);
  CHECK(lattice_distance(A.raw(BoundaryPoint{I, Side::plus}) + 0.5 * tau, tau) < 1e-11);
  CHECK(lattice_distance(A.raw(BoundaryPoint{I, Side::minus}) - 0.5 * tau, tau) < 1e-11);
  CHECK(lattice_distance(A.raw(BoundaryPoint{0.0, Side::plus}) - 0.25 - 0.5 * tau, tau) < 1e-11);
}

TEST_CASE("Abel map against direct high-precision quadrature") {
  // mpmath quad of Γ∫_k^∞ dζ/w at 30 digits.
  CHECK(std::abs(abel12().raw(cplx(0.7, 0.9)) - cplx(0.150096869621218069454569163558, -0.191226977552080907297756270244)) <
        1e-12);
  CHECK(std::abs(abel12().raw(cplx(-1.3, -0.4)) - cplx(0.279887459718902853560079262708, 0.163917880992056366943815613508)) <
        1e-12);
}

TEST_CASE("Abel map parity and cut relations") {
  const AbelMap& A = abel12();
  const cplx tau = per12().tau;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 40; ++i) {
    const cplx k(u(rng), u(rng));
    if (std::abs(k.real()) < 0.05 || distance_to_branch_points(k, gap12()) < 0.05) continue;
    CHECK(lattice_distance(A.raw(k) + A.raw(-k) - 0.5, tau) < 1e-11);
    CHECK(lattice_distance(A.raw(SheetPoint{k, Sheet::lower}) + A.raw(k), tau) < 1e-15);
  }
  for (double y : {1.9, 1.2, -1.05, -1.7}) {
    CHECK(lattice_distance(A.raw(BoundaryPoint{I * y, Side::plus}) + A.raw(BoundaryPoint{I * y, Side::minus}), tau) <
          1e-10);
  }
  for (double y : {0.9, 0.3, -0.5}) {
    CHECK(lattice_distance(A.raw(BoundaryPoint{I * y, Side::plus}) - A.raw(BoundaryPoint{I * y, Side::minus}), tau) <
          1e-10);
  }
}

TEST_CASE("Abel map is continuous into a branch point and across the near-point route") {
  const AbelMap& A = abel12();
  const cplx base = A.raw(BoundaryPoint{I, Side::plus});
  for (double r : {1e-3, 1e-5, 1e-7}) {
    const cplx k = I + r * std::exp(I * 0.3);
    // The increment is ∫ dζ/w ~ √r near a square-root branch point.
    CHECK(std::abs(A.raw(k) - base) < 5.0 * std::sqrt(r));
  }
  // Points just inside and outside the radius where the path changes.
  const cplx in = A.raw(I + 0.4999 * std::exp(I * 0.7));
  const cplx out = A.raw(I + 0.5001 * std::exp(I * 0.7));
  CHECK(std::abs(in - out) < 1e-3);
  CHECK(std::abs(in - out) > 1e-6);
  const cplx mid = A.raw(I + 0.5 * std::exp(I * 0.7));
  CHECK(std::abs(2.0 * mid - in - out) < 1e-8);
}

TEST_CASE("w and gamma-tilde branch conventions") {
  const GapSpec& g = gap12();
  CHECK_THROWS_AS(w_eval(SheetPoint{I, Sheet::upper}, g), Error);
  try {
    (void)w_eval(SheetPoint{1.5 * I, Sheet::upper}, g);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::path_violation);
  }
  // w ~ k² at infinity on the upper sheet.
  CHECK(std::abs(w_eval(SheetPoint{cplx(1e4, 3e3), Sheet::upper}, g) / (cplx(1e4, 3e3) * cplx(1e4, 3e3)) - 1.0) < 1e-6);
  CHECK(std::abs(w_eval(SheetPoint{0.0, Sheet::upper}, g) - 2.0) < 1e-15);
  CHECK(std::abs(w_eval(SheetPoint{0.3, Sheet::lower}, g) + w_eval(SheetPoint{0.3, Sheet::upper}, g)) < 1e-15);
  for (double y : {1.3, 1.8}) {
    CHECK(std::abs(gamma_tilde(BoundaryPoint{I * y, Side::plus}, g) / gamma_tilde(BoundaryPoint{I * y, Side::minus}, g) -
                   I) < 1e-14);
    CHECK(std::abs(gamma_tilde(BoundaryPoint{-I * y, Side::plus}, g) /
                       gamma_tilde(BoundaryPoint{-I * y, Side::minus}, g) +
                   I) < 1e-14);
  }
  for (cplx k : {cplx(0.0, 0.0), cplx(3.0, 0.0), cplx(0.0, 5.0)}) {
    const cplx v = gamma_tilde(k, g);
    CHECK(v.real() > 0.0);
    CHECK(std::abs(v.imag()) < 1e-15);
  }
  CHECK(std::abs(gamma_tilde(cplx(0.4, 1.7), g) - gamma_tilde(cplx(-0.4, -1.7), g)) < 1e-15);
}

TEST_CASE("contour helpers") {
  const GapSpec& g = gap12();
  CHECK(contour_segment(1.5, g) == Segment::upper_cut);
  CHECK(contour_segment(0.0, g) == Segment::middle);
  CHECK(contour_segment(-1.5, g) == Segment::lower_cut);
  CHECK_THROWS_AS(contour_segment(2.5, g), Error);
  CHECK(on_contour(cplx(0.0, 1.5), g));
  CHECK_FALSE(on_contour(cplx(0.0, 2.5), g));
  CHECK_FALSE(on_contour(cplx(1e-3, 0.5), g));
  const BoundaryPoint n = negate(BoundaryPoint{0.5 * I, Side::plus});
  CHECK(n.k == -0.5 * I);
  CHECK(n.side == Side::minus);
  CHECK_THROWS_AS(abel12().raw(cplx(0.0, 0.5)), Error);
}

TEST_CASE("lattice reduction") {
  const cplx tau = per12().tau;
  const AbelValue v = lattice_reduce(cplx(3.3, 0.0) + 4.0 * tau, per12());
  CHECK(std::abs(v.z - cplx(0.3, 0.0)) < 1e-13);
  CHECK(lattice_distance(2.0 - 3.0 * tau, tau) < 1e-14);
  CHECK(integer_distance(cplx(2.999, 0.0)) == doctest::Approx(0.001));
}
