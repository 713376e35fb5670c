#include "torus_rh/surface.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "torus_rh/quadrature.hpp"

namespace torus_rh {

namespace {

constexpr cplx I(0.0, 1.0);
constexpr double pi = 3.14159265358979323846;

struct MoebiusArgs {
  cplx upper;  // (k - ia)/(k - ic)
  cplx lower;  // (k + ia)/(k + ic)
};

double axis_tolerance(const GapSpec& g) noexcept { return 1e-12 * g.c(); }

bool is_branch_point(cplx k, const GapSpec& g) noexcept {
  return distance_to_branch_points(k, g) <= 1e-14 * g.c();
}

MoebiusArgs moebius(cplx k, const GapSpec& g) {
  return {(k - I * g.a()) / (k - I * g.c()), (k + I * g.a()) / (k + I * g.c())};
}

// Exactly on the axis u± are real; the side is carried by the sign of the
// zero imaginary part: d u₊/dk = i(c-a)/(k-ic)² has Im u₊ ~ +Re k, while
// d u₋/dk has Im u₋ ~ -Re k.
MoebiusArgs moebius(const BoundaryPoint& p, const GapSpec& g) {
  const double y = p.k.imag();
  const double a = g.a();
  const double c = g.c();
  const double s = sign_of(p.side);
  return {cplx((y - a) / (y - c), s * 0.0), cplx((y + a) / (y + c), -s * 0.0)};
}

bool on_open_cut(cplx k, const GapSpec& g) noexcept {
  if (k.real() != 0.0) return false;
  const double y = std::abs(k.imag());
  return y > g.a() && y < g.c();
}

double check_finite_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw Error(ErrorKind::invalid_argument, std::string(name) + " must be a positive finite number");
  }
  return v;
}

// Upper-sheet w at base + delta without guards, for quadrature nodes that may
// sit arbitrarily close to a branch point or (off-axis) to a cut. Each factor
// k ∓ ia, k ∓ ic is formed as (base ∓ ia) + delta so that a node next to a
// branch-point base keeps its relative accuracy.
cplx w_offset(cplx base, cplx delta, const GapSpec& g) {
  const cplx ia = I * g.a();
  const cplx ic = I * g.c();
  const cplx m_a = (base - ia) + delta;
  const cplx m_c = (base - ic) + delta;
  const cplx p_a = (base + ia) + delta;
  const cplx p_c = (base + ic) + delta;
  return m_c * p_c * std::sqrt(m_a / m_c) * std::sqrt(p_a / p_c);
}

cplx w_unchecked(const BoundaryPoint& p, const GapSpec& g) {
  const auto u = moebius(p, g);
  const double y = p.k.imag();
  return (g.c() * g.c() - y * y) * std::sqrt(u.upper) * std::sqrt(u.lower);
}

quad::Options quad_options(const PeriodOptions& opt) {
  quad::Options q;
  q.rel_tol = std::max(0.5 * opt.quad_tol, 2e-14);
  // Kronrod estimates near branch points sit well above the true error.
  q.accept_rel = 100.0 * opt.quad_tol;
  return q;
}

// ∫_{from}^{to} dζ/w along the straight segment, `from` possibly a branch point.
quad::Result segment_from_singular(cplx from, cplx to, const GapSpec& g, const quad::Options& q) {
  const cplx d = to - from;
  auto f = [&](double s) { return d / w_offset(from, d * s, g); };
  return quad::integrate_unit_start(f, q);
}

// ∫_{k}^{∞} dζ/w along the ray ζ = k/u, u ∈ (0, 1].
quad::Result radial_to_infinity(cplx k, const GapSpec& g, const quad::Options& q) {
  auto f = [&](double u) { return 1.0 / (k * w_over_k2(k / u, g)); };
  return quad::integrate(f, 0.0, 1.0, q);
}

}  // namespace

GapSpec::GapSpec(double a, double c)
    : a_(check_finite_positive(a, "a")), c_(check_finite_positive(c, "c")) {
  if (!(a_ < c_)) {
    throw Error(ErrorKind::invalid_argument, "band edges must satisfy 0 < a < c");
  }
}

Segment contour_segment(double y, const GapSpec& g) {
  const double tol = axis_tolerance(g);
  if (std::abs(y) > g.c() + tol) {
    throw Error(ErrorKind::off_contour, "point is beyond the band edges ±ic");
  }
  if (y > g.a()) return Segment::upper_cut;
  if (y < -g.a()) return Segment::lower_cut;
  return Segment::middle;
}

BoundaryPoint boundary_point(double y, Side side, const GapSpec& g, Sheet sheet) {
  contour_segment(y, g);
  return BoundaryPoint{cplx(0.0, std::clamp(y, -g.c(), g.c())), side, sheet};
}

BoundaryPoint negate(const BoundaryPoint& p) noexcept {
  return BoundaryPoint{cplx(0.0, -p.k.imag()), opposite(p.side), p.sheet};
}

bool on_contour(cplx k, const GapSpec& g) noexcept {
  const double tol = axis_tolerance(g);
  return std::abs(k.real()) <= tol && std::abs(k.imag()) <= g.c() + tol;
}

double distance_to_branch_points(cplx k, const GapSpec& g) noexcept {
  const std::array<cplx, 4> pts{I * g.c(), I * g.a(), -I * g.a(), -I * g.c()};
  double d = std::numeric_limits<double>::infinity();
  for (const cplx& p : pts) d = std::min(d, std::abs(k - p));
  return d;
}

cplx w_eval(const SheetPoint& p, const GapSpec& g) {
  if (is_branch_point(p.k, g)) throw Error(ErrorKind::branch_point_eval, "w at a branch point");
  if (on_open_cut(p.k, g)) throw Error(ErrorKind::path_violation, "w on a cut needs a side tag");
  const auto u = moebius(p.k, g);
  const cplx w = (p.k * p.k + g.c() * g.c()) * std::sqrt(u.upper) * std::sqrt(u.lower);
  return sign_of(p.sheet) * w;
}

cplx w_eval(const BoundaryPoint& p, const GapSpec& g) {
  if (!on_contour(p.k, g)) throw Error(ErrorKind::off_contour, "boundary point off [ic,-ic]");
  if (is_branch_point(p.k, g)) throw Error(ErrorKind::branch_point_eval, "w at a branch point");
  const auto u = moebius(p, g);
  const double y = p.k.imag();
  const cplx w = (g.c() * g.c() - y * y) * std::sqrt(u.upper) * std::sqrt(u.lower);
  return sign_of(p.sheet) * w;
}

cplx w_over_k2(cplx k, const GapSpec& g) {
  const auto u = moebius(k, g);
  const cplx ck = g.c() / k;
  return (1.0 + ck * ck) * std::sqrt(u.upper) * std::sqrt(u.lower);
}

cplx gamma_tilde(cplx k, const GapSpec& g) {
  if (is_branch_point(k, g)) throw Error(ErrorKind::branch_point_eval, "gamma_tilde at a branch point");
  if (on_open_cut(k, g)) throw Error(ErrorKind::path_violation, "gamma_tilde on a cut needs a side tag");
  const auto u = moebius(k, g);
  return std::sqrt(std::sqrt(u.upper)) * std::sqrt(std::sqrt(u.lower));
}

cplx gamma_tilde(const BoundaryPoint& p, const GapSpec& g) {
  if (!on_contour(p.k, g)) throw Error(ErrorKind::off_contour, "boundary point off [ic,-ic]");
  if (is_branch_point(p.k, g)) throw Error(ErrorKind::branch_point_eval, "gamma_tilde at a branch point");
  const auto u = moebius(p, g);
  return std::sqrt(std::sqrt(u.upper)) * std::sqrt(std::sqrt(u.lower));
}

cplx root_middle(cplx k, const GapSpec& g) {
  if (std::abs(k) == 0.0 || distance_to_branch_points(k, g) <= 1e-14 * g.c()) {
    throw Error(ErrorKind::branch_point_eval, "sqrt(k^2+a^2) at a singular point");
  }
  const cplx ak = g.a() / k;
  return k * std::sqrt(1.0 + ak * ak);
}

TorusPeriods compute_periods(const GapSpec& g, PeriodOptions opt) {
  const quad::Options q = quad_options(opt);
  const cplx ia = I * g.a();

  // a-cycle: twice the upper-sheet integral from ia to -ia through the gap.
  const quad::Result top = segment_from_singular(ia, 0.0, g, q);
  const quad::Result bottom = segment_from_singular(-ia, 0.0, g, q);
  const cplx a_period = 2.0 * (top.value - bottom.value);
  const double a_err = 2.0 * (top.error + bottom.error);

  // b-cycle: counterclockwise around [ia, ic]; both sides give ∫_{ia}^{ic} dζ/w₊.
  const double a = g.a();
  const double c = g.c();
  // Plus-side value on (ia, ic): u₊ = (y-a)/(y-c) < 0 approached from above.
  auto cut = [&](double s, double sc) {
    const double ya = (c - a) * s;
    const double yc = -(c - a) * sc;
    const double y = s < 0.5 ? a + ya : c + yc;
    const cplx up(ya / yc, 0.0);
    const cplx lo((y + a) / (y + c), -0.0);
    const cplx w = -yc * (c + y) * std::sqrt(up) * std::sqrt(lo);
    return I * (c - a) / w;
  };
  const quad::Result b_half = quad::integrate_unit_both_ends(cut, q);
  const cplx b_period = 2.0 * b_half.value;
  const double b_err = 2.0 * b_half.error;

  TorusPeriods out;
  out.gamma = 1.0 / a_period;
  out.tau = out.gamma * b_period;
  const double ga = std::abs(out.gamma);
  out.gamma_error = ga * ga * a_err;
  out.tau_error = ga * b_err + std::abs(b_period) * ga * ga * a_err;
  return out;
}

cplx a_period_via_circle(const GapSpec& g) {
  const double c = g.c();
  quad::Options q;
  auto half_circle = [&](double direction) {
    // ζ(s) = c e^{iφ}, φ = π/2 + direction·π s, s ∈ [0, 1].
    // e^{iθ} - 1 without cancellation for small θ.
    auto expm1_i = [](double theta) { return 2.0 * I * std::sin(theta / 2.0) * std::exp(I * theta / 2.0); };
    auto f = [&, direction](double s, double sc) {
      const cplx ic = I * c;
      // Offsets are taken from whichever endpoint is nearer.
      const cplx base = s < 0.5 ? ic : -ic;
      const cplx delta = s < 0.5 ? ic * expm1_i(direction * pi * s) : -ic * expm1_i(-direction * pi * sc);
      const cplx zeta = base + delta;
      return I * zeta * (direction * pi) / w_offset(base, delta, g);
    };
    return quad::integrate_unit_both_ends(f, q).value;
  };
  return half_circle(-1.0) + half_circle(1.0);
}

AbelValue lattice_reduce(cplx z, const TorusPeriods& periods) {
  const cplx tau = periods.tau;
  const double t = tau.imag();
  const double l = std::floor(z.imag() / t);
  cplx r = z - l * tau;
  if (r.imag() >= t || r.imag() < 0.0) r.imag(r.imag() >= t ? r.imag() - t : 0.0);
  const double n = std::floor(r.real());
  r -= n;
  if (r.real() >= 1.0) r.real(0.0);
  if (r.real() < 0.0) r.real(0.0);
  if (r.imag() >= t) r.imag(0.0);
  return {r};
}

double lattice_distance(cplx z, cplx tau) {
  const double l0 = std::round(z.imag() / tau.imag());
  double best = std::numeric_limits<double>::infinity();
  for (double l = l0 - 1; l <= l0 + 1; ++l) {
    const cplx r = z - l * tau;
    const double n = std::round(r.real());
    best = std::min(best, std::abs(r - n));
  }
  return best;
}

double integer_distance(cplx z) { return std::abs(z - std::round(z.real())); }

AbelMap::AbelMap(GapSpec g, TorusPeriods periods, PeriodOptions opt)
    : gap_(g), periods_(periods), opt_(opt), a_inf_(0.0) {
  const quad::Options q = quad_options(opt_);
  const cplx ic = I * gap_.c();
  const quad::Result near = segment_from_singular(ic, 2.0 * ic, gap_, q);
  const quad::Result far = radial_to_infinity(2.0 * ic, gap_, q);
  a_inf_ = periods_.gamma * (near.value + far.value);
}

cplx AbelMap::tail_integral(cplx k, std::optional<Side> side) const {
  const quad::Options q = quad_options(opt_);
  const double c = gap_.c();
  if (side) {
    // Leave the contour horizontally on the requested side, then go radially.
    const cplx k1(sign_of(*side) * c, k.imag());
    const cplx d = k1 - cplx(0.0, k.imag());
    const double y = k.imag();
    auto f = [&](double s) {
      const double x = d.real() * s;
      // Nodes closer to the axis than a double can resolve take the one-sided value.
      const cplx w = std::abs(x) < 1e-280 ? w_unchecked(BoundaryPoint{cplx(0.0, y), *side}, gap_)
                                          : w_offset(cplx(0.0, y), cplx(x, 0.0), gap_);
      return d / w;
    };
    const quad::Result leg = quad::integrate_unit_start(f, q);
    return leg.value + radial_to_infinity(k1, gap_, q).value;
  }
  // Near a branch point b the path starts at b: ∫_k^∞ = ∫_b^∞ - ∫_b^k, the
  // segment b → k staying in the half-plane of k.
  const double a = gap_.a();
  const double near = 0.5 * std::min(a, c - a);
  for (cplx b : {I * c, I * a, -I * a, -I * c}) {
    if (std::abs(k - b) < near) {
      const Side s = k.real() < 0.0 ? Side::minus : Side::plus;
      return tail_integral(b, s) - segment_from_singular(b, k, gap_, q).value;
    }
  }
  if (k.real() == 0.0 || std::abs(k.real()) >= c) {
    return radial_to_infinity(k, gap_, q).value;
  }
  const cplx k1(std::copysign(c, k.real()), k.imag());
  return segment_from_singular(k, k1, gap_, q).value + radial_to_infinity(k1, gap_, q).value;
}

cplx AbelMap::raw(cplx k) const {
  if (!std::isfinite(k.real()) || !std::isfinite(k.imag())) {
    throw Error(ErrorKind::invalid_argument, "Abel map argument is not finite");
  }
  if (on_contour(k, gap_)) {
    throw Error(ErrorKind::path_violation, "Abel map on [ic,-ic] needs a side tag (use a boundary point)");
  }
  return a_inf_ - periods_.gamma * tail_integral(k, std::nullopt);
}

cplx AbelMap::raw(const SheetPoint& p) const { return sign_of(p.sheet) * raw(p.k); }

cplx AbelMap::raw(const BoundaryPoint& p) const {
  if (!on_contour(p.k, gap_)) throw Error(ErrorKind::off_contour, "boundary point off [ic,-ic]");
  const cplx k(0.0, p.k.imag());
  const cplx upper = a_inf_ - periods_.gamma * tail_integral(k, p.side);
  return sign_of(p.sheet) * upper;
}

cplx AbelMap::raw(const InfinityPoint& p) const { return sign_of(p.sheet) * a_inf_; }

cplx AbelMap::raw(const SurfacePoint& p) const {
  return std::visit([this](const auto& q) { return raw(q); }, p);
}

AbelValue abel_map(const SurfacePoint& p, const GapSpec& g, const TorusPeriods& periods) {
  return AbelMap(g, periods)(p);
}

}  // namespace torus_rh
