#include "torus_rh/torus_fn.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "torus_rh/quadrature.hpp"

namespace torus_rh {

namespace {

constexpr cplx I(0.0, 1.0);
constexpr double pi = std::numbers::pi;
constexpr double pole_guard = 1e-6;

std::shared_ptr<const Theta3> theta_for(const TorusPeriods& periods) {
  return std::make_shared<const Theta3>(Modulus(periods.tau));
}

bool integer_offset(cplx d) {
  return std::abs(d.imag()) <= 1e-15 && std::abs(d.real() - std::round(d.real())) <= 1e-15;
}

// Drops numerator/denominator pairs whose shifts differ by an integer; θ₃ has
// period 1, so such pairs cancel identically.
void cancel_pairs(ThetaQuotient& t) {
  for (std::size_t i = 0; i < t.alpha.size();) {
    auto it = std::find_if(t.beta.begin(), t.beta.end(), [&](cplx b) { return integer_offset(t.alpha[i] - b); });
    if (it == t.beta.end()) {
      ++i;
      continue;
    }
    t.beta.erase(it);
    t.alpha.erase(t.alpha.begin() + static_cast<std::ptrdiff_t>(i));
  }
}

std::vector<cplx> expand(const std::vector<DivisorPoint>& pts) {
  std::vector<cplx> out;
  for (const auto& p : pts) {
    if (p.multiplicity <= 0) throw Error(ErrorKind::invalid_argument, "divisor multiplicities must be positive");
    out.insert(out.end(), static_cast<std::size_t>(p.multiplicity), p.z);
  }
  return out;
}

Divisor divisor_from_shifts(const ThetaQuotient& t, cplx K) {
  Divisor d;
  for (cplx a : t.alpha) d.zeros.push_back({a - K, 1});
  for (cplx b : t.beta) d.poles.push_back({b - K, 1});
  return d;
}

QuasiFn from_shifts(const TorusPeriods& periods, PhaseParam lam, std::vector<cplx> alpha, std::vector<cplx> beta,
                    Symmetry sym) {
  ThetaQuotient t{1.0, std::move(alpha), std::move(beta)};
  const Divisor d = divisor_from_shifts(t, riemann_constant(periods));
  cancel_pairs(t);
  return QuasiFn(theta_for(periods), lam, {t}, d, sym);
}

// Whether the multiset of points is invariant under z ↦ z + 1/2 modulo the lattice.
bool half_period_invariant(const std::vector<DivisorPoint>& pts, cplx tau) {
  const std::vector<cplx> z = expand(pts);
  std::vector<bool> used(z.size(), false);
  for (std::size_t i = 0; i < z.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < z.size() && !found; ++j) {
      if (!used[j] && lattice_distance(z[i] + 0.5 - z[j], tau) <= 1e-9) {
        used[j] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

PhaseParam::PhaseParam(double lambda_tilde) : value_(lambda_tilde), reduced_(0.0) {
  if (!std::isfinite(lambda_tilde)) throw Error(ErrorKind::invalid_argument, "lambda must be finite");
  reduced_ = lambda_tilde - std::floor(lambda_tilde);
  if (reduced_ >= 1.0) reduced_ = 0.0;
}

bool PhaseParam::is_integer(double tol) const noexcept {
  return std::abs(value_ - std::round(value_)) <= tol;
}

bool PhaseParam::is_half_integer(double tol) const noexcept {
  return std::abs(value_ - 0.5 - std::round(value_ - 0.5)) <= tol;
}

int Divisor::zero_count() const noexcept {
  int n = 0;
  for (const auto& p : zeros) n += p.multiplicity;
  return n;
}

int Divisor::pole_count() const noexcept {
  int n = 0;
  for (const auto& p : poles) n += p.multiplicity;
  return n;
}

cplx Divisor::abel_sum() const noexcept {
  cplx s = 0.0;
  for (const auto& p : zeros) s += static_cast<double>(p.multiplicity) * p.z;
  for (const auto& p : poles) s -= static_cast<double>(p.multiplicity) * p.z;
  return s;
}

const char* to_string(Symmetry s) noexcept {
  switch (s) {
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::anti_symmetric: return "anti_symmetric";
    case Symmetry::none: return "none";
  }
  return "none";
}

cplx riemann_constant(const TorusPeriods& periods) noexcept { return 0.5 * (1.0 + periods.tau); }

QuasiFn::QuasiFn(std::shared_ptr<const Theta3> theta, PhaseParam lambda, std::vector<ThetaQuotient> terms,
                 std::optional<Divisor> divisor, Symmetry symmetry)
    : theta_(std::move(theta)),
      lambda_(lambda),
      terms_(std::move(terms)),
      divisor_(std::move(divisor)),
      symmetry_(symmetry) {
  if (!theta_ || terms_.empty()) throw Error(ErrorKind::invalid_argument, "quasi-periodic function needs terms");
}

cplx QuasiFn::term_value(const ThetaQuotient& t, cplx z) const {
  cplx num = t.coef;
  for (cplx a : t.alpha) num *= (*theta_)(z - a);
  cplx den = 1.0;
  for (cplx b : t.beta) den *= (*theta_)(z - b);
  return num / den;
}

double QuasiFn::pole_distance(cplx z) const {
  const cplx K = 0.5 * (1.0 + tau());
  double d = std::numeric_limits<double>::infinity();
  for (const auto& t : terms_) {
    for (cplx b : t.beta) d = std::min(d, lattice_distance(z - b - K, tau()));
  }
  return d;
}

QuasiValue QuasiFn::evaluate(cplx z) const {
  QuasiValue out;
  if (pole_distance(z) < pole_guard) {
    out.near_pole = true;
    out.value = cplx(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
    return out;
  }
  cplx v = 0.0;
  for (const auto& t : terms_) v += term_value(t, z);
  out.value = v;
  return out;
}

cplx QuasiFn::operator()(cplx z) const {
  const QuasiValue v = evaluate(z);
  if (v.near_pole) throw Error(ErrorKind::pole_proximity, "evaluation within 1e-6 of a pole");
  return v.value;
}

void QuasiFn::evaluate(std::span<const cplx> z, std::span<cplx> out) const {
  if (out.size() < z.size()) throw Error(ErrorKind::invalid_argument, "batch output too small");
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(z.size()), cplx(0.0));
  std::vector<cplx> args;
  std::vector<cplx> vals;
  for (const auto& t : terms_) {
    const std::size_t na = t.alpha.size();
    const std::size_t stride = na + t.beta.size();
    if (stride == 0) {
      for (std::size_t i = 0; i < z.size(); ++i) out[i] += t.coef;
      continue;
    }
    args.resize(z.size() * stride);
    vals.resize(args.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      for (std::size_t j = 0; j < na; ++j) args[i * stride + j] = z[i] - t.alpha[j];
      for (std::size_t j = 0; j < t.beta.size(); ++j) args[i * stride + na + j] = z[i] - t.beta[j];
    }
    theta_->evaluate(args, vals);
    for (std::size_t i = 0; i < z.size(); ++i) {
      cplx num = t.coef;
      cplx den = 1.0;
      for (std::size_t j = 0; j < na; ++j) num *= vals[i * stride + j];
      for (std::size_t j = na; j < stride; ++j) den *= vals[i * stride + j];
      out[i] += num / den;
    }
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (pole_distance(z[i]) < pole_guard) {
      throw Error(ErrorKind::pole_proximity, "batch evaluation within 1e-6 of a pole");
    }
  }
}

QuasiFn QuasiFn::scaled(cplx s) const {
  std::vector<ThetaQuotient> t = terms_;
  for (auto& q : t) q.coef *= s;
  return QuasiFn(theta_, lambda_, std::move(t), divisor_, symmetry_);
}

QuasiFn QuasiFn::plus(const QuasiFn& other) const {
  if (std::abs(other.tau() - tau()) > 1e-14 * std::abs(tau()) ||
      std::abs(other.lambda().value() - lambda_.value()) > 1e-14) {
    throw Error(ErrorKind::invalid_argument, "sum of functions on different tori or phases");
  }
  std::vector<ThetaQuotient> t = terms_;
  t.insert(t.end(), other.terms_.begin(), other.terms_.end());
  const Symmetry s = symmetry_ == other.symmetry_ ? symmetry_ : Symmetry::none;
  return QuasiFn(theta_, lambda_, std::move(t), std::nullopt, s);
}

QuasiFn QuasiFn::with_symmetry(Symmetry s) const { return QuasiFn(theta_, lambda_, terms_, divisor_, s); }

QuasiFn build_from_divisor(const Divisor& d, PhaseParam lam, const TorusPeriods& periods, cplx e0) {
  if (d.zero_count() != d.pole_count()) {
    throw Error(ErrorKind::divisor_mismatch, "zero and pole counts differ");
  }
  std::vector<cplx> zeros = expand(d.zeros);
  const std::vector<cplx> poles = expand(d.poles);
  const cplx excess = d.abel_sum() - lam.value();
  if (lattice_distance(excess, periods.tau) > 1e-9) {
    throw Error(ErrorKind::abel_condition_violated, "sum of zeros minus poles differs from lambda modulo the lattice");
  }
  Divisor normalized = d;
  if (!zeros.empty()) {
    // Move the first zero's representative so that Σz - Σp = Λ̃ exactly.
    zeros.front() -= excess;
    normalized.zeros.front().multiplicity -= 1;
    normalized.zeros.push_back({zeros.front(), 1});
    if (normalized.zeros.front().multiplicity == 0) normalized.zeros.erase(normalized.zeros.begin());
  }
  const cplx K = riemann_constant(periods);
  ThetaQuotient t{e0, {}, {}};
  for (cplx z : zeros) t.alpha.push_back(z + K);
  for (cplx p : poles) t.beta.push_back(p + K);
  cancel_pairs(t);
  QuasiFn e(theta_for(periods), lam, {t}, normalized, Symmetry::none);
  Symmetry s = Symmetry::none;
  try {
    s = classify_symmetry(e);
  } catch (const Error&) {
    s = Symmetry::none;
  }
  return e.with_symmetry(s);
}

QuasiFn canonical_symmetric(PhaseParam lam, const TorusPeriods& periods) {
  const double h = lam.value() / 2.0;
  QuasiFn e = from_shifts(periods, lam, {h - 0.5, h}, {-0.5, 0.0}, Symmetry::symmetric);
  // Product and single-quotient forms are the same function.
  for (cplx z : {cplx(0.137, 0.211 * periods.tau.imag()), cplx(0.371, 0.633 * periods.tau.imag())}) {
    const QuasiValue p = e.evaluate(z);
    if (p.near_pole) continue;
    const cplx c = canonical_symmetric_compact(z, lam, periods);
    if (std::abs(p.value - c) > 1e-9 * (1.0 + std::abs(c))) {
      throw std::logic_error("symmetric solution: product and compact forms disagree");
    }
  }
  return e;
}

cplx canonical_symmetric_compact(cplx z, PhaseParam lam, const TorusPeriods& periods) {
  const Theta3 th2(Modulus(2.0 * periods.tau));
  return th2(2.0 * z - lam.value() + 0.5) / th2(2.0 * z + 0.5);
}

QuasiFn canonical_antisymmetric(PhaseParam lam, const TorusPeriods& periods) {
  const double h = lam.value() / 2.0;
  const cplx tau = periods.tau;
  return from_shifts(periods, lam, {h + 0.5 * (1.0 + tau), h - 0.5 * tau}, {-0.5, 0.0}, Symmetry::anti_symmetric);
}

QuasiFn canonical_antisymmetric_origin_pole(PhaseParam lam, const TorusPeriods& periods) {
  const double h = lam.value() / 2.0;
  const cplx tau = periods.tau;
  return from_shifts(periods, lam, {-0.25 + h + 0.5 * tau, 0.25 + h - 0.5 * tau}, {-0.25, 0.25},
                     Symmetry::anti_symmetric);
}

QuasiFn build_symmetric_pair(cplx p1, int parity, PhaseParam lam, const TorusPeriods& periods) {
  if (parity != 0 && parity != 1) throw Error(ErrorKind::invalid_argument, "parity must be 0 or 1");
  const cplx tau = periods.tau;
  const Symmetry sym = parity == 0 ? Symmetry::symmetric : Symmetry::anti_symmetric;
  if (parity == 0 && lam.is_integer()) {
    Divisor empty;
    return QuasiFn(theta_for(periods), lam, {ThetaQuotient{1.0, {}, {}}}, empty, sym);
  }
  const double n = parity;
  const cplx z1 = p1 + lam.value() / 2.0 + n * tau / 2.0;
  const cplx z2 = z1 + 0.5 - n * tau;
  const cplx K = riemann_constant(periods);
  return from_shifts(periods, lam, {z1 + K, z2 + K}, {p1 + K, p1 + 0.5 + K}, sym);
}

std::vector<cplx> regular_points(const QuasiFn& e, int count, unsigned seed, double min_pole_distance) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const cplx tau = e.tau();
  std::vector<cplx> pts;
  for (int tries = 0; static_cast<int>(pts.size()) < count; ++tries) {
    if (tries > 100000) throw Error(ErrorKind::invalid_argument, "no regular sample points found");
    const cplx z = u(rng) + u(rng) * tau;
    if (e.pole_distance(z) < min_pole_distance || e.pole_distance(z + 0.5) < min_pole_distance) continue;
    pts.push_back(z);
  }
  return pts;
}

Symmetry classify_symmetry(const QuasiFn& e) {
  // Candidates with |E| well away from zero so the ratio is well conditioned.
  const std::vector<cplx> cand = regular_points(e, 40, 12345u, 0.05);
  std::vector<std::pair<double, cplx>> scored;
  for (cplx z : cand) scored.emplace_back(std::min(std::abs(e(z)), std::abs(e(z + 0.5))), z);
  std::stable_sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<cplx> ratios;
  for (int i = 0; i < 5; ++i) {
    const cplx z = scored[static_cast<std::size_t>(i)].second;
    ratios.push_back(e(z + 0.5) / e(z));
  }
  const cplx c0 = ratios.front();
  double spread = 0.0;
  for (cplx c : ratios) spread = std::max(spread, std::abs(c - c0));
  const double tol = 1e-9 * (1.0 + std::abs(c0));
  if (spread > tol) return Symmetry::none;

  if (e.divisor()) {
    const Divisor& d = *e.divisor();
    if (half_period_invariant(d.zeros, e.tau()) && half_period_invariant(d.poles, e.tau()) &&
        std::abs(c0 * c0 - 1.0) > 1e-10) {
      throw Error(ErrorKind::inconsistent_ratio, "half-period invariant divisor with C^2 != 1");
    }
  }
  if (std::abs(c0 - 1.0) <= tol) return Symmetry::symmetric;
  if (std::abs(c0 + 1.0) <= tol) return Symmetry::anti_symmetric;
  throw Error(ErrorKind::inconsistent_ratio, "half-period ratio is constant but not +1 or -1");
}

Decomposition decompose(const QuasiFn& e, PhaseParam lam, const TorusPeriods& periods) {
  const QuasiFn es = canonical_symmetric(lam, periods);
  const QuasiFn ea = canonical_antisymmetric(lam, periods);
  auto clear = [&](cplx z) {
    return std::min({e.pole_distance(z), e.pole_distance(z + 0.5), es.pole_distance(z), es.pole_distance(z + 0.5),
                     ea.pole_distance(z), ea.pole_distance(z + 0.5)});
  };
  // Anchor z₀ where both canonical solutions are largest.
  const std::vector<cplx> cand = regular_points(es, 40, 777u, 0.05);
  cplx z0 = cand.front();
  double best = -1.0;
  for (cplx z : cand) {
    if (clear(z) < 0.05) continue;
    const double score = std::min(std::abs(es(z)), std::abs(ea(z)));
    if (score > best) {
      best = score;
      z0 = z;
    }
  }
  const cplx e0 = e(z0);
  const cplx e1 = e(z0 + 0.5);
  Decomposition out;
  out.c_s = 0.5 * (e0 + e1) / es(z0);
  out.c_a = 0.5 * (e0 - e1) / ea(z0);

  const std::vector<cplx> check = regular_points(es, 40, 778u, 0.05);
  int used = 0;
  for (cplx z : check) {
    if (used == 10) break;
    if (clear(z) < 0.05) continue;
    ++used;
    const cplx v = e(z);
    const cplx r = out.c_s * es(z) + out.c_a * ea(z);
    out.residual = std::max(out.residual, std::abs(v - r) / (1.0 + std::abs(v)));
  }
  if (out.residual > 1e-10) {
    throw Error(ErrorKind::pole_mismatch, "function is not a combination of the canonical solutions");
  }
  return out;
}

double quasi_periodicity_residual(const QuasiFn& e, std::span<const cplx> points) {
  const cplx phase = std::exp(2.0 * pi * I * e.lambda().value());
  double worst = 0.0;
  for (cplx z : points) {
    const cplx v = e(z);
    const double scale = 1.0 + std::abs(v);
    worst = std::max(worst, std::abs(e(z + e.tau()) - phase * v) / scale);
    worst = std::max(worst, std::abs(e(z + 1.0) - v) / scale);
  }
  return worst;
}

namespace {

// E'(z) from the 16-point trapezoid rule on a Cauchy circle of radius r.
cplx derivative(const QuasiFn& e, cplx z, double r) {
  constexpr int n = 16;
  cplx s = 0.0;
  for (int j = 0; j < n; ++j) {
    const cplx u = std::exp(I * (2.0 * pi * j / n));
    s += e(z + r * u) / u;
  }
  return s / (static_cast<double>(n) * r);
}

std::vector<cplx> known_points(const QuasiFn& e) {
  std::vector<cplx> pts;
  const cplx K = 0.5 * (1.0 + e.tau());
  if (e.divisor()) {
    for (const auto& p : e.divisor()->zeros) pts.push_back(p.z);
    for (const auto& p : e.divisor()->poles) pts.push_back(p.z);
  } else {
    for (const auto& t : e.terms()) {
      for (cplx b : t.beta) pts.push_back(b - K);
    }
  }
  return pts;
}

}  // namespace

cplx choose_cell_base(const QuasiFn& e) {
  const cplx tau = e.tau();
  const std::vector<cplx> pts = known_points(e);
  cplx best_base = -0.5 * (1.0 + tau);
  double best = -1.0;
  constexpr int grid = 16;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const cplx base = (i + 0.5) / grid - 0.5 + ((j + 0.5) / grid - 0.5) * tau;
      double margin = std::numeric_limits<double>::infinity();
      for (cplx p : pts) {
        // Lattice coordinates of p relative to the corner.
        const cplx d = p - base;
        double v = d.imag() / tau.imag();
        double u = d.real() - v * tau.real();
        u -= std::floor(u);
        v -= std::floor(v);
        margin = std::min({margin, std::min(u, 1.0 - u), std::min(v, 1.0 - v) * tau.imag()});
      }
      if (margin > best) {
        best = margin;
        best_base = base;
      }
    }
  }
  return best_base;
}

CellCount argument_principle(const QuasiFn& e, cplx base) {
  const cplx tau = e.tau();
  const std::array<cplx, 5> corner{base, base + 1.0, base + 1.0 + tau, base + tau, base};
  CellCount out;
  const double r = 1e-2 * std::min(1.0, tau.imag());

  // Winding number by accumulated argument increments.
  constexpr int steps = 2000;
  double arg = 0.0;
  for (int s = 0; s < 4; ++s) {
    const cplx a = corner[static_cast<std::size_t>(s)];
    const cplx d = corner[static_cast<std::size_t>(s) + 1] - a;
    cplx prev = e(a);
    for (int i = 1; i <= steps; ++i) {
      const cplx cur = e(a + d * (static_cast<double>(i) / steps));
      arg += std::arg(cur / prev);
      prev = cur;
    }
  }
  out.winding = arg / (2.0 * pi);

  quad::Options q;
  q.rel_tol = 1e-13;
  q.accept_rel = 1e-9;
  q.accept_abs = 1e-10;
  cplx moment = 0.0;
  for (int s = 0; s < 4; ++s) {
    const cplx a = corner[static_cast<std::size_t>(s)];
    const cplx d = corner[static_cast<std::size_t>(s) + 1] - a;
    auto f = [&](double t) {
      const cplx z = a + d * t;
      return z * derivative(e, z, r) / e(z) * d;
    };
    moment += quad::integrate(f, 0.0, 1.0, q).value;
  }
  out.moment = moment / (2.0 * pi * I);
  return out;
}

}  // namespace torus_rh
