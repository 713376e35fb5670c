#include "torus_rh/model_rh.hpp"

#include <cmath>
#include <numbers>

namespace torus_rh {

namespace {

constexpr cplx I(0.0, 1.0);
constexpr double pi = std::numbers::pi;
constexpr double lhopital_step = 1e-5;

}  // namespace

Mat2 sigma1() noexcept { return {{{0.0, 1.0}, {1.0, 0.0}}}; }
Mat2 sigma3() noexcept { return {{{1.0, 0.0}, {0.0, -1.0}}}; }
Mat2 identity2() noexcept { return {{{1.0, 0.0}, {0.0, 1.0}}}; }

Mat2 mul(const Mat2& x, const Mat2& y) noexcept {
  Mat2 r{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
  }
  return r;
}

Vec2 mul(const Vec2& x, const Mat2& y) noexcept {
  return {x[0] * y[0][0] + x[1] * y[1][0], x[0] * y[0][1] + x[1] * y[1][1]};
}

cplx det(const Mat2& x) noexcept { return x[0][0] * x[1][1] - x[0][1] * x[1][0]; }

Mat2 inverse(const Mat2& x) {
  const cplx d = det(x);
  if (d == cplx(0.0)) throw Error(ErrorKind::invalid_argument, "singular 2x2 matrix");
  return {{{x[1][1] / d, -x[0][1] / d}, {-x[1][0] / d, x[0][0] / d}}};
}

double norm(const Mat2& x) noexcept {
  double s = 0.0;
  for (const auto& row : x) {
    for (cplx v : row) s += std::norm(v);
  }
  return std::sqrt(s);
}

double norm(const Vec2& x) noexcept { return std::sqrt(std::norm(x[0]) + std::norm(x[1])); }

Mat2 sub(const Mat2& x, const Mat2& y) noexcept {
  Mat2 r{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][j] - y[i][j];
  }
  return r;
}

Vec2 sub(const Vec2& x, const Vec2& y) noexcept { return {x[0] - y[0], x[1] - y[1]}; }

JumpMatrix jump_matrix(const BoundaryPoint& k, const GapSpec& g, PhaseParam lam) {
  if (!on_contour(k.k, g)) throw Error(ErrorKind::off_contour, "jump matrix requested off [ic,-ic]");
  const Segment s = contour_segment(k.k.imag(), g);
  switch (s) {
    case Segment::upper_cut: return {s, {{{0.0, I}, {I, 0.0}}}};
    case Segment::lower_cut: return {s, {{{0.0, -I}, {-I, 0.0}}}};
    case Segment::middle: {
      const cplx e = std::exp(-2.0 * pi * I * lam.value());
      return {s, {{{e, 0.0}, {0.0, 1.0 / e}}}};
    }
  }
  throw Error(ErrorKind::off_contour, "unknown contour segment");
}

KPoint negate(const KPoint& p) {
  if (const auto* b = std::get_if<BoundaryPoint>(&p)) return negate(*b);
  return -std::get<cplx>(p);
}

cplx base_of(const KPoint& p) noexcept {
  if (const auto* b = std::get_if<BoundaryPoint>(&p)) return b->k;
  return std::get<cplx>(p);
}

SurfaceContext::SurfaceContext(GapSpec g, PeriodOptions opt)
    : gap_(g), periods_(compute_periods(g, opt)), abel_(g, periods_, opt) {}

PreparedPoint SurfaceContext::prepare(const KPoint& p) const {
  const cplx k = base_of(p);
  if (!std::isfinite(k.real()) || !std::isfinite(k.imag())) {
    throw Error(ErrorKind::invalid_argument, "evaluation point is not finite");
  }
  if (distance_to_branch_points(k, gap_) <= 1e-8 * gap_.c()) {
    throw Error(ErrorKind::singular_set_eval, "evaluation within 1e-8*c of a branch point");
  }
  const KPoint q = negate(p);
  PreparedPoint out{p, k, 0.0, 0.0, 0.0, 0.0};
  if (const auto* b = std::get_if<BoundaryPoint>(&p)) {
    const BoundaryPoint nb = std::get<BoundaryPoint>(q);
    out.gamma = gamma_tilde(*b, gap_);
    out.gamma_neg = gamma_tilde(nb, gap_);
    out.abel = abel_.raw(BoundaryPoint{b->k, b->side, Sheet::upper});
    out.abel_neg = abel_.raw(BoundaryPoint{nb.k, nb.side, Sheet::upper});
  } else {
    out.gamma = gamma_tilde(k, gap_);
    out.gamma_neg = gamma_tilde(-k, gap_);
    out.abel = abel_.raw(k);
    out.abel_neg = abel_.raw(-k);
  }
  return out;
}

ModelSolutions::ModelSolutions(std::shared_ptr<const SurfaceContext> ctx, PhaseParam lam)
    : ctx_(std::move(ctx)),
      lam_(lam),
      es_(canonical_symmetric(lam, ctx_->periods())),
      ea_(canonical_antisymmetric(lam, ctx_->periods())),
      eah_(canonical_antisymmetric_origin_pole(lam, ctx_->periods())) {
  const cplx a_inf = ctx_->abel().at_infinity();
  ns_inf_ = es_(a_inf);
  na_inf_ = ea_(a_inf);
  nah_inf_ = eah_(a_inf);
}

cplx ModelSolutions::n_infinity(NKind kind) const {
  switch (kind) {
    case NKind::sym: return ns_inf_;
    case NKind::anti: return na_inf_;
    case NKind::anti_origin: return nah_inf_;
  }
  return ns_inf_;
}

namespace {

const QuasiFn& pick(NKind kind, const QuasiFn& s, const QuasiFn& a, const QuasiFn& ah) {
  switch (kind) {
    case NKind::sym: return s;
    case NKind::anti: return a;
    case NKind::anti_origin: return ah;
  }
  return s;
}

}  // namespace

cplx ModelSolutions::n_value(NKind kind, const SheetPoint& p) const {
  const GapSpec& g = ctx_->gap();
  if (distance_to_branch_points(p.k, g) <= 1e-8 * g.c() ||
      (kind == NKind::anti_origin && std::abs(p.k) <= 1e-8 * g.c())) {
    throw Error(ErrorKind::singular_set_eval, "N evaluated on its singular set");
  }
  return pick(kind, es_, ea_, eah_)(ctx_->abel().raw(p));
}

cplx ModelSolutions::n_value(NKind kind, const BoundaryPoint& p) const {
  const GapSpec& g = ctx_->gap();
  if (distance_to_branch_points(p.k, g) <= 1e-8 * g.c() ||
      (kind == NKind::anti_origin && std::abs(p.k) <= 1e-8 * g.c())) {
    throw Error(ErrorKind::singular_set_eval, "N evaluated on its singular set");
  }
  return pick(kind, es_, ea_, eah_)(ctx_->abel().raw(p));
}

Vec2 ModelSolutions::n_pair(const QuasiFn& e, const PreparedPoint& p) const { return {e(p.abel), e(-p.abel)}; }

void ModelSolutions::guard_origin(const PreparedPoint& p) const {
  if (std::abs(p.k) <= 1e-8 * ctx_->gap().c()) {
    throw Error(ErrorKind::singular_set_eval, "evaluation within 1e-8*c of the pole at k = 0");
  }
}

Vec2 ModelSolutions::m(const PreparedPoint& p) const {
  const Vec2 n = n_pair(es_, p);
  const cplx f = p.gamma / ns_inf_;
  return {f * n[0], f * n[1]};
}

Mat2 ModelSolutions::m1(const PreparedPoint& p) const {
  const cplx s = ns_inf_;
  const cplx t = na_inf_;
  auto alpha = [&](cplx ns, cplx na) { return 0.5 * (t * ns + s * na); };
  auto beta = [&](cplx ns, cplx na) { return 0.5 * (t * ns - s * na); };
  const cplx ns_k = es_(p.abel);
  const cplx na_k = ea_(p.abel);
  const cplx ns_m = es_(p.abel_neg);
  const cplx na_m = ea_(p.abel_neg);
  const cplx g = p.gamma;
  return {{{g * alpha(ns_k, na_k), g * beta(ns_m, na_m)}, {g * beta(ns_k, na_k), g * alpha(ns_m, na_m)}}};
}

Mat2 ModelSolutions::m2(const PreparedPoint& p) const {
  const Vec2 ns = n_pair(es_, p);
  const Vec2 na = n_pair(ea_, p);
  const cplx g = p.gamma;
  return {{{g * ns[0], g * ns[1]}, {g * na[0], g * na[1]}}};
}

Mat2 ModelSolutions::m3(const PreparedPoint& p) const {
  if (lam_.is_integer()) {
    throw Error(ErrorKind::undefined_phase, "M3 undefined for integer lambda");
  }
  guard_origin(p);
  const cplx s = ns_inf_;
  const cplx t = nah_inf_;
  auto alpha = [&](cplx ns, cplx na) { return 0.5 * (t * ns + s * na); };
  auto beta = [&](cplx ns, cplx na) { return 0.5 * (t * ns - s * na); };
  const cplx ns_k = es_(p.abel);
  const cplx na_k = eah_(p.abel);
  const cplx ns_m = es_(p.abel_neg);
  const cplx na_m = eah_(p.abel_neg);
  const cplx g = p.gamma / (s * t);
  return {{{g * alpha(ns_k, na_k), g * beta(ns_m, na_m)}, {g * beta(ns_k, na_k), g * alpha(ns_m, na_m)}}};
}

Vec2 ModelSolutions::m_from_m1(const PreparedPoint& p) const {
  auto row_sum = [](const Mat2& x) { return Vec2{x[0][0] + x[1][0], x[0][1] + x[1][1]}; };
  if (!lam_.is_half_integer(1e-9)) {
    const Vec2 r = row_sum(m1(p));
    const cplx d = ns_inf_ * na_inf_;
    return {r[0] / d, r[1] / d};
  }
  const ModelSolutions up(ctx_, PhaseParam(lam_.value() + lhopital_step));
  const ModelSolutions dn(ctx_, PhaseParam(lam_.value() - lhopital_step));
  const Vec2 ru = row_sum(up.m1(p));
  const Vec2 rd = row_sum(dn.m1(p));
  const cplx d = up.ns_inf_ * up.na_inf_ - dn.ns_inf_ * dn.na_inf_;
  return {(ru[0] - rd[0]) / d, (ru[1] - rd[1]) / d};
}

Vec2 ModelSolutions::witness(const PreparedPoint& p) const {
  guard_origin(p);
  const Vec2 v = m(p);
  return {v[0] / p.k, v[1] / p.k};
}

Vec2 ModelSolutions::origin_solution(const PreparedPoint& p) const {
  guard_origin(p);
  const Vec2 n = n_pair(eah_, p);
  return {p.gamma * n[0], p.gamma * n[1]};
}

}  // namespace torus_rh
