#include "torus_rh/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <tuple>

#include "torus_rh/simd/theta_kernels.hpp"

namespace torus_rh {

namespace {

constexpr cplx I(0.0, 1.0);
constexpr double pi = std::numbers::pi;

double scale1(double v) { return std::max(1.0, v); }

ResidualReport error_report(const std::string& name, double tolerance, const std::exception& e) {
  ResidualReport r;
  r.identity_name = name;
  r.tolerance = tolerance;
  r.max_residual = std::numeric_limits<double>::infinity();
  r.mean_residual = r.max_residual;
  r.pass = false;
  r.status = ReportStatus::error;
  const auto* dom = dynamic_cast<const Error*>(&e);
  r.add("error_kind", std::string(dom ? to_string(dom->kind()) : "internal"));
  r.add("error", std::string(e.what()));
  return r;
}

// Runs one report builder; a domain or internal failure becomes a failed report.
template <class F>
void run(std::vector<ResidualReport>& out, const std::string& name, double tolerance, F&& f) {
  try {
    out.push_back(f());
  } catch (const std::exception& e) {
    out.push_back(error_report(name, tolerance, e));
  }
}

ResidualReport undefined_report(const std::string& name, double tolerance) {
  ResidualReport r;
  r.identity_name = name;
  r.tolerance = tolerance;
  r.pass = true;
  r.status = ReportStatus::undefined_phase;
  r.add("note", std::string("UndefinedPhase: not defined for integer lambda"));
  return r;
}

// Random off-contour points in the box |Re|,|Im| <= 3c, clear of the axis and of ±ia, ±ic.
std::vector<cplx> random_plane_points(const GapSpec& g, int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0 * g.c(), 3.0 * g.c());
  std::vector<cplx> pts;
  while (static_cast<int>(pts.size()) < count) {
    const cplx k(u(rng), u(rng));
    if (std::abs(k.real()) < 0.05 * g.c() || distance_to_branch_points(k, g) < 0.05 * g.c()) continue;
    pts.push_back(k);
  }
  return pts;
}

double stdev_over_mean(const std::vector<cplx>& v) {
  cplx mean = 0.0;
  for (cplx x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (cplx x : v) var += std::norm(x - mean);
  var /= static_cast<double>(v.size());
  return std::sqrt(var) / std::abs(mean);
}

template <class T>
T neville(const std::vector<double>& x, std::vector<T> p, T (*axpy)(const T&, double, const T&, double)) {
  // p[i] holds the running interpolant through points i..i+m evaluated at 0.
  const std::size_t n = x.size();
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      const double xi = x[i];
      const double xj = x[i + m];
      // P(0) = (x_j P_i - x_i P_{i+1}) / (x_j - x_i)
      p[i] = axpy(p[i], xj / (xj - xi), p[i + 1], -xi / (xj - xi));
    }
  }
  return p[0];
}

Vec2 axpy_vec(const Vec2& a, double s, const Vec2& b, double t) { return {s * a[0] + t * b[0], s * a[1] + t * b[1]}; }

Mat2 axpy_mat(const Mat2& a, double s, const Mat2& b, double t) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) r[i][j] = s * a[i][j] + t * b[i][j];
  }
  return r;
}

Mat2 as_row(const Vec2& v) { return {{{v[0], v[1]}, {0.0, 0.0}}}; }

void add_common(ResidualReport& r, const GapSpec& g, PhaseParam lam, unsigned seed) {
  r.add("a", g.a());
  r.add("c", g.c());
  r.add("lambda_tilde", lam.value());
  r.add("seed", static_cast<double>(seed));
}

}  // namespace

const char* to_string(ReportStatus s) noexcept {
  switch (s) {
    case ReportStatus::evaluated: return "evaluated";
    case ReportStatus::undefined_phase: return "UndefinedPhase";
    case ReportStatus::error: return "error";
  }
  return "error";
}

ResidualReport make_report(std::string name, const std::vector<double>& residuals, double tolerance) {
  ResidualReport r;
  r.identity_name = std::move(name);
  r.tolerance = tolerance;
  r.sample_count = residuals.size();
  double sum = 0.0;
  double worst = 0.0;
  bool finite = true;
  for (double v : residuals) {
    if (!std::isfinite(v)) finite = false;
    worst = std::max(worst, v);
    sum += v;
  }
  if (!finite) worst = std::numeric_limits<double>::infinity();
  r.max_residual = worst;
  r.mean_residual = residuals.empty() ? 0.0 : sum / static_cast<double>(residuals.size());
  r.pass = finite && worst <= tolerance;
  return r;
}

void Tolerances::set(const std::string& key, double value) {
  if (!std::isfinite(value)) throw Error(ErrorKind::invalid_argument, "tolerance must be finite: " + key);
  if (key == "asymptotic_slope") {
    asymptotic_slope = value;
    return;
  }
  if (!(value > 0.0)) throw Error(ErrorKind::invalid_argument, "tolerance must be positive: " + key);
  if (key == "theta") theta = value;
  else if (key == "periods") periods = value;
  else if (key == "abel") abel = value;
  else if (key == "abel_infinity") abel_infinity = value;
  else if (key == "jump") jump = value;
  else if (key == "algebraic") algebraic = value;
  else if (key == "symmetry") symmetry = value;
  else if (key == "normalization") normalization = value;
  else if (key == "exponent_window" || key == "exponent") exponent_window = value;
  else if (key == "decomposition") decomposition = value;
  else if (key == "ratio") ratio = value;
  else if (key == "abel_condition") abel_condition = value;
  else throw Error(ErrorKind::invalid_argument, "unknown tolerance key: " + key);
}

std::vector<std::string> Tolerances::keys() {
  return {"theta",    "periods",  "abel",          "abel_infinity", "asymptotic_slope", "jump",  "algebraic",
          "symmetry", "normalization", "exponent_window", "decomposition", "ratio", "abel_condition"};
}

double sampling_scale(const GapSpec& g) noexcept { return std::min(g.a(), g.c() - g.a()); }

ContourPlan make_contour_plan(const GapSpec& g, int count, unsigned seed, double margin_frac) {
  if (count < 3) throw Error(ErrorKind::invalid_argument, "contour plan needs at least three points");
  ContourPlan p;
  p.seed = seed;
  p.margin = margin_frac * sampling_scale(g);
  std::mt19937_64 rng(seed);
  // Each cut gets a quarter of the points however short it is.
  const int per_cut = std::max(1, count / 4);
  auto fill = [&](double lo, double hi, int n) {
    std::uniform_real_distribution<double> u(lo + p.margin, hi - p.margin);
    for (int i = 0; i < n; ++i) p.y.push_back(u(rng));
  };
  fill(g.a(), g.c(), per_cut);
  fill(-g.c(), -g.a(), per_cut);
  fill(-g.a(), g.a(), count - 2 * per_cut);
  std::sort(p.y.begin(), p.y.end(), std::greater<>());
  return p;
}

PreparedPlan prepare_plan(const SurfaceContext& ctx, const ContourPlan& plan, std::vector<double> offset_fracs) {
  const GapSpec& g = ctx.gap();
  std::sort(offset_fracs.begin(), offset_fracs.end(), std::greater<>());
  PreparedPlan out;
  out.plan = plan;
  for (double f : offset_fracs) out.offsets.push_back(f * sampling_scale(g));
  const double guard = 10.0 * out.offsets.front();
  for (double y : plan.y) {
    if (distance_to_branch_points(cplx(0.0, y), g) < guard) {
      throw Error(ErrorKind::sampling_too_close, "contour sample within the guard radius of a branch point");
    }
    std::vector<PreparedPoint> p;
    std::vector<PreparedPoint> m;
    for (double e : out.offsets) {
      p.push_back(ctx.prepare(cplx(e, y)));
      m.push_back(ctx.prepare(cplx(-e, y)));
    }
    out.plus.push_back(std::move(p));
    out.minus.push_back(std::move(m));
    out.contour.push_back(BoundaryPoint{cplx(0.0, y), Side::plus});
  }
  return out;
}

FieldSpec vector_field(std::string name, std::function<Vec2(const PreparedPoint&)> f, bool singular_at_origin) {
  FieldSpec s;
  s.name = std::move(name);
  s.rows = 1;
  s.eval = [f = std::move(f)](const PreparedPoint& p) { return as_row(f(p)); };
  s.singular_at_origin = singular_at_origin;
  return s;
}

Vec2 extrapolate_to_zero(const std::vector<double>& x, const std::vector<Vec2>& f) {
  if (x.size() != f.size() || x.empty()) throw Error(ErrorKind::invalid_argument, "extrapolation sizes differ");
  return neville<Vec2>(x, f, axpy_vec);
}

Mat2 extrapolate_to_zero(const std::vector<double>& x, const std::vector<Mat2>& f) {
  if (x.size() != f.size() || x.empty()) throw Error(ErrorKind::invalid_argument, "extrapolation sizes differ");
  return neville<Mat2>(x, f, axpy_mat);
}

ResidualReport certify_jump(const FieldSpec& field, const PreparedPlan& plan, const GapSpec& g, PhaseParam lam,
                            double tolerance) {
  std::vector<double> residuals;
  std::vector<double> per_offset(plan.offsets.size(), 0.0);
  for (std::size_t i = 0; i < plan.contour.size(); ++i) {
    if (field.singular_at_origin && std::abs(plan.contour[i].k.imag()) < plan.plan.margin) continue;
    const Mat2 v = jump_matrix(plan.contour[i], g, lam).matrix;
    std::vector<Mat2> sp;
    std::vector<Mat2> sm;
    for (std::size_t j = 0; j < plan.offsets.size(); ++j) {
      sp.push_back(field.eval(plan.plus[i][j]));
      sm.push_back(field.eval(plan.minus[i][j]));
      const double r = norm(sub(sp.back(), mul(sm.back(), v))) / scale1(norm(sm.back()));
      per_offset[j] = std::max(per_offset[j], r);
    }
    const Mat2 p0 = extrapolate_to_zero(plan.offsets, sp);
    const Mat2 m0 = extrapolate_to_zero(plan.offsets, sm);
    residuals.push_back(norm(sub(p0, mul(m0, v))) / scale1(norm(m0)));
  }
  ResidualReport r = make_report("jump." + field.name, residuals, tolerance);
  r.add("a", g.a());
  r.add("c", g.c());
  r.add("lambda_tilde", lam.value());
  r.add("seed", static_cast<double>(plan.plan.seed));
  r.add("epsilon", plan.offsets);
  r.add("residual_per_epsilon", per_offset);
  return r;
}

ExponentFit fit_singularity(const std::function<double(cplx)>& norm_at, cplx center, std::vector<double> radii) {
  if (radii.size() < 3) throw Error(ErrorKind::invalid_argument, "exponent fit needs at least three radii");
  std::sort(radii.begin(), radii.end(), std::greater<>());
  if (std::adjacent_find(radii.begin(), radii.end()) != radii.end() || !(radii.back() > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "radii must be positive and distinct");
  }
  const std::size_t n = radii.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::log(radii[i]);
  const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0;
  for (double v : x) sxx += (v - xbar) * (v - xbar);

  std::array<std::vector<double>, 4> y;
  double sxy = 0.0;
  for (int j = 0; j < 4; ++j) {
    const cplx dir = std::exp(I * (pi / 4.0 + j * pi / 2.0));
    for (std::size_t i = 0; i < n; ++i) {
      const double v = norm_at(center + radii[i] * dir);
      if (!(v > 1e-300) || !std::isfinite(v)) {
        throw Error(ErrorKind::degenerate_fit, "solution values at the noise floor near the center");
      }
      y[static_cast<std::size_t>(j)].push_back(std::log(v));
    }
  }
  std::array<double, 4> ybar{};
  for (int j = 0; j < 4; ++j) {
    const auto& yj = y[static_cast<std::size_t>(j)];
    ybar[static_cast<std::size_t>(j)] = std::accumulate(yj.begin(), yj.end(), 0.0) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) sxy += (x[i] - xbar) * (yj[i] - ybar[static_cast<std::size_t>(j)]);
  }
  const double slope = sxy / (4.0 * sxx);
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (int j = 0; j < 4; ++j) {
    const auto& yj = y[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < n; ++i) {
      const double fit = ybar[static_cast<std::size_t>(j)] + slope * (x[i] - xbar);
      ss_res += (yj[i] - fit) * (yj[i] - fit);
      ss_tot += (yj[i] - ybar[static_cast<std::size_t>(j)]) * (yj[i] - ybar[static_cast<std::size_t>(j)]);
    }
  }
  ExponentFit out;
  out.center = center;
  out.exponent = slope;
  out.confidence = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  out.radii = radii;
  if (slope >= -0.05) {
    throw Error(ErrorKind::degenerate_fit, "no singularity at the center (fitted exponent " +
                                               std::to_string(slope) + ")");
  }
  return out;
}

std::vector<FieldSpec> solution_fields(const ModelSolutions& ms) {
  std::vector<FieldSpec> f;
  f.push_back(vector_field("m", [&ms](const PreparedPoint& p) { return ms.m(p); }));
  f.push_back(FieldSpec{"M1", 2, [&ms](const PreparedPoint& p) { return ms.m1(p); }, false});
  f.push_back(FieldSpec{"M2", 2, [&ms](const PreparedPoint& p) { return ms.m2(p); }, false});
  if (!ms.lambda().is_integer()) {
    f.push_back(FieldSpec{"M3", 2, [&ms](const PreparedPoint& p) { return ms.m3(p); }, true});
  }
  f.push_back(vector_field("witness", [&ms](const PreparedPoint& p) { return ms.witness(p); }, true));
  return f;
}

std::vector<ResidualReport> vanishing_witness(const ModelSolutions& ms, const PreparedPlan& plan,
                                              const Tolerances& tol, unsigned seed) {
  const SurfaceContext& ctx = ms.context();
  const GapSpec& g = ctx.gap();
  const PhaseParam lam = ms.lambda();
  std::vector<ResidualReport> out;

  run(out, "witness.jump", tol.jump, [&] {
    ResidualReport r = certify_jump(
        vector_field("witness", [&ms](const PreparedPoint& p) { return ms.witness(p); }, true), plan, g, lam,
        tol.jump);
    r.identity_name = "witness.jump";
    return r;
  });

  run(out, "witness.antisymmetry", tol.symmetry, [&] {
    std::mt19937_64 rng(seed + 801u);
    std::vector<double> res;
    for (cplx k : random_plane_points(g, 30, rng)) {
      const Vec2 a = ms.witness(ctx.prepare(k));
      const Vec2 b = ms.witness(ctx.prepare(-k));
      // w(-k) = -w(k)σ₁
      const Vec2 want{-a[1], -a[0]};
      res.push_back(norm(sub(b, want)) / scale1(norm(a)));
    }
    ResidualReport r = make_report("witness.antisymmetry", res, tol.symmetry);
    add_common(r, g, lam, seed);
    return r;
  });

  // k·w(k) = m(k) → (1,1): extrapolated along k = iR, R ∈ {100, 200, 400, 800}c.
  run(out, "witness.decay", tol.normalization, [&] {
    std::vector<double> x;
    std::vector<Vec2> v;
    double literal = 0.0;
    for (double f : {100.0, 200.0, 400.0, 800.0}) {
      const cplx k(0.0, f * g.c());
      const Vec2 w = ms.witness(ctx.prepare(k));
      x.push_back(1.0 / (f * g.c()));
      v.push_back({k * w[0], k * w[1]});
      if (f == 100.0) literal = norm(w);
    }
    const Vec2 lim = extrapolate_to_zero(x, v);
    ResidualReport r = make_report("witness.decay", {norm(sub(lim, Vec2{1.0, 1.0}))}, tol.normalization);
    add_common(r, g, lam, seed);
    r.add("norm_at_100c", literal);
    return r;
  });

  if (lam.is_integer()) {
    run(out, "witness.origin_solution_match", tol.ratio * 10.0, [&] {
      std::mt19937_64 rng(seed + 802u);
      std::vector<cplx> ratios;
      for (cplx k : random_plane_points(g, 20, rng)) {
        const PreparedPoint p = ctx.prepare(k);
        const Vec2 w = ms.witness(p);
        const Vec2 h = ms.origin_solution(p);
        ratios.push_back(w[0] / h[0]);
        ratios.push_back(w[1] / h[1]);
      }
      ResidualReport r = make_report("witness.origin_solution_match", {stdev_over_mean(ratios)}, tol.ratio * 10.0);
      add_common(r, g, lam, seed);
      return r;
    });
  }
  return out;
}

std::vector<ResidualReport> corruption_sweep(const ModelSolutions& ms, const PreparedPlan& plan, double delta,
                                             double jump_tolerance) {
  const GapSpec& g = ms.context().gap();
  std::vector<ResidualReport> out;
  for (const FieldSpec& base : solution_fields(ms)) {
    for (int i = 0; i < base.rows; ++i) {
      for (int j = 0; j < 2; ++j) {
        const std::string name = "corruption." + base.name + "." + std::to_string(i + 1) + std::to_string(j + 1);
        run(out, name, 0.0, [&] {
          FieldSpec bad = base;
          bad.eval = [&base, i, j, delta](const PreparedPoint& p) {
            Mat2 v = base.eval(p);
            v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *= (1.0 + delta);
            return v;
          };
          const ResidualReport jr = certify_jump(bad, plan, g, ms.lambda(), jump_tolerance);
          // Passing means the corruption was caught.
          ResidualReport r = make_report(name, {jr.pass ? 1.0 : 0.0}, 0.0);
          r.add("delta", delta);
          r.add("corrupted_jump_residual", jr.max_residual);
          r.add("lambda_tilde", ms.lambda().value());
          return r;
        });
      }
    }
  }
  return out;
}

bool all_pass(const std::vector<ResidualReport>& reports) noexcept {
  return std::all_of(reports.begin(), reports.end(), [](const ResidualReport& r) { return r.pass; });
}

namespace {

namespace simd = torus_rh::simd;

cplx random_tau(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-0.5, 0.5);
  std::uniform_real_distribution<double> im(0.5, 1.5);
  return {re(rng), im(rng)};
}

void theta_reports(std::vector<ResidualReport>& out, const Tolerances& tol, unsigned seed) {
  run(out, "theta.quasi_periodicity", tol.theta, [&] {
    std::mt19937_64 rng(seed + 101u);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<long> shift(-2, 2);
    std::vector<double> res;
    for (int i = 0; i < 1000; ++i) {
      const Modulus tau(random_tau(rng));
      const cplx z(u(rng), u(rng));
      const long n = shift(rng);
      const long l = shift(rng);
      const cplx base = theta3(z, tau).value;
      const cplx f = theta3_shift_factor(z, tau, n, l);
      const cplx lhs = theta3(z + static_cast<double>(n) + static_cast<double>(l) * tau.value(), tau).value;
      res.push_back(std::abs(lhs - f * base) / (std::abs(f) * scale1(std::abs(base))));
    }
    return make_report("theta.quasi_periodicity", res, tol.theta);
  });

  run(out, "theta.evenness", tol.theta, [&] {
    std::mt19937_64 rng(seed + 102u);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> res;
    for (int i = 0; i < 200; ++i) {
      const Modulus tau(random_tau(rng));
      const cplx z(u(rng), u(rng));
      const cplx a = theta3(z, tau).value;
      res.push_back(std::abs(theta3(-z, tau).value - a) / scale1(std::abs(a)));
    }
    return make_report("theta.evenness", res, tol.theta);
  });

  run(out, "theta.zero_at_half_periods", 1e-11, [&] {
    std::mt19937_64 rng(seed + 103u);
    std::vector<double> res;
    double min_slope = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 40; ++i) {
      const Modulus tau(random_tau(rng));
      const cplx K = 0.5 * (1.0 + tau.value());
      for (long m = -2; m <= 2; ++m) {
        for (long l = -2; l <= 2; ++l) {
          const cplx z = K + static_cast<double>(m) + static_cast<double>(l) * tau.value();
          res.push_back(std::abs(theta3(z, tau).value) / std::abs(theta3_shift_factor(K, tau, m, l)));
        }
      }
      const double h = 1e-5;
      const cplx d = (theta3(K + h, tau).value - theta3(K - h, tau).value) / (2.0 * h);
      min_slope = std::min(min_slope, std::abs(d));
    }
    ResidualReport r = make_report("theta.zero_at_half_periods", res, 1e-11);
    // A simple zero has a nonvanishing derivative.
    r.add("min_abs_derivative", min_slope);
    if (!(min_slope > 1e-3)) r.pass = false;
    return r;
  });

  run(out, "theta.double_modulus", tol.theta, [&] {
    std::mt19937_64 rng(seed + 104u);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> res;
    for (int i = 0; i < 200; ++i) {
      const Modulus tau(random_tau(rng));
      res.push_back(theta3_double_modulus_identity_residual(cplx(u(rng), u(rng)), tau));
    }
    return make_report("theta.double_modulus", res, tol.theta);
  });

  run(out, "theta.kernel_agreement", 1e-13, [&] {
    std::mt19937_64 rng(seed + 105u);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<double> res;
    const bool have_avx2 = simd::avx2_available();
    for (int i = 0; i < 8 && have_avx2; ++i) {
      const cplx tau = random_tau(rng);
      const simd::SeriesTable table = simd::make_series_table(tau);
      std::vector<cplx> z(257);
      for (cplx& v : z) v = cplx(u(rng), u(rng) * tau.imag());
      std::vector<cplx> a(z.size());
      std::vector<cplx> b(z.size());
      simd::theta_series_scalar(table, z, a);
#if defined(TORUS_RH_HAVE_AVX2_KERNEL)
      simd::theta_series_avx2(table, z, b);
#else
      b = a;
#endif
      for (std::size_t j = 0; j < z.size(); ++j) res.push_back(std::abs(a[j] - b[j]) / scale1(std::abs(a[j])));
    }
    ResidualReport r = make_report("theta.kernel_agreement", res, 1e-13);
    r.add("active_isa", std::string(simd::to_string(simd::active_isa())));
    r.add("avx2_available", have_avx2 ? 1.0 : 0.0);
    return r;
  });
}

void period_reports(std::vector<ResidualReport>& out, const SurfaceContext& ctx, const Tolerances& tol,
                    PhaseParam lam, unsigned seed) {
  const GapSpec& g = ctx.gap();
  const TorusPeriods& P = ctx.periods();
  auto finish = [&](ResidualReport r) {
    add_common(r, g, lam, seed);
    return r;
  };

  run(out, "periods.a_normalization", tol.periods, [&] {
    return finish(make_report("periods.a_normalization", {std::abs(P.gamma * a_period_via_circle(g) - 1.0)},
                              tol.periods));
  });

  run(out, "periods.elliptic_oracle", tol.periods, [&] {
    const double k = g.a() / g.c();
    const double K = std::comp_ellint_1(k);
    const double Kp = std::comp_ellint_1(std::sqrt((1.0 - k) * (1.0 + k)));
    const cplx gamma = I * g.c() / (4.0 * K);
    const cplx tau = I * Kp / (2.0 * K);
    ResidualReport r = make_report("periods.elliptic_oracle",
                                   {std::abs(P.gamma - gamma) / std::abs(gamma), std::abs(P.tau - tau) / std::abs(tau)},
                                   tol.periods);
    r.add("gamma_im", P.gamma.imag());
    r.add("tau_im", P.tau.imag());
    return finish(r);
  });

  run(out, "periods.imaginary", tol.periods, [&] {
    std::vector<double> res{std::abs(P.gamma.real()) / std::abs(P.gamma), std::abs(P.tau.real()) / std::abs(P.tau)};
    if (!(P.tau.imag() > 0.0)) res.push_back(std::numeric_limits<double>::infinity());
    ResidualReport r = make_report("periods.imaginary", res, tol.periods);
    r.add("gamma_sign", P.gamma.imag() > 0.0 ? std::string("i*R+") : std::string("i*R-"));
    return finish(r);
  });

  run(out, "periods.scaling", tol.periods, [&] {
    const double s = 3.7;
    const TorusPeriods Q = compute_periods(GapSpec(s * g.a(), s * g.c()));
    return finish(make_report("periods.scaling",
                              {std::abs(Q.tau - P.tau) / std::abs(P.tau), std::abs(Q.gamma - s * P.gamma) /
                                                                              std::abs(s * P.gamma)},
                              tol.periods));
  });
}

void abel_reports(std::vector<ResidualReport>& out, const SurfaceContext& ctx, const Tolerances& tol, PhaseParam lam,
                  unsigned seed) {
  const GapSpec& g = ctx.gap();
  const AbelMap& A = ctx.abel();
  const cplx tau = ctx.periods().tau;
  const cplx gamma = ctx.periods().gamma;
  auto finish = [&](ResidualReport r) {
    add_common(r, g, lam, seed);
    return r;
  };

  run(out, "abel.infinity", tol.abel_infinity, [&] {
    return finish(make_report("abel.infinity", {lattice_distance(A.at_infinity() - 0.25, tau)}, tol.abel_infinity));
  });

  run(out, "abel.base_point", tol.abel, [&] {
    return finish(make_report("abel.base_point", {lattice_distance(A.raw(BoundaryPoint{I * g.c(), Side::plus}), tau)},
                              tol.abel));
  });

  run(out, "abel.branch_ia", tol.abel, [&] {
    const cplx p = A.raw(BoundaryPoint{I * g.a(), Side::plus});
    const cplx m = A.raw(BoundaryPoint{I * g.a(), Side::minus});
    return finish(make_report("abel.branch_ia", {lattice_distance(p + 0.5 * tau, tau), lattice_distance(m - 0.5 * tau, tau)},
                              tol.abel));
  });

  run(out, "abel.origin", tol.abel, [&] {
    const cplx want = 0.25 + 0.5 * tau;
    const cplx p = A.raw(BoundaryPoint{0.0, Side::plus});
    const cplx m = A.raw(BoundaryPoint{0.0, Side::minus});
    return finish(make_report("abel.origin", {lattice_distance(p - want, tau), lattice_distance(m - want, tau)},
                              tol.abel));
  });

  run(out, "abel.cut_relations", tol.abel, [&] {
    std::mt19937_64 rng(seed + 201u);
    std::vector<double> res;
    auto sample = [&](double lo, double hi, bool sum) {
      std::uniform_real_distribution<double> u(lo, hi);
      for (int i = 0; i < 200; ++i) {
        const double y = u(rng);
        const cplx p = A.raw(BoundaryPoint{I * y, Side::plus});
        const cplx m = A.raw(BoundaryPoint{I * y, Side::minus});
        res.push_back(lattice_distance(sum ? p + m : p - m, tau));
      }
    };
    const double d = 1e-3 * g.c();
    sample(g.a() + d, g.c() - d, true);
    sample(-g.c() + d, -g.a() - d, true);
    sample(-g.a() + d, g.a() - d, false);
    return finish(make_report("abel.cut_relations", res, tol.abel));
  });

  run(out, "abel.parity", tol.abel, [&] {
    std::mt19937_64 rng(seed + 202u);
    std::vector<double> res;
    for (cplx k : random_plane_points(g, 50, rng)) res.push_back(lattice_distance(A.raw(k) + A.raw(-k) - 0.5, tau));
    return finish(make_report("abel.parity", res, tol.abel));
  });

  run(out, "abel.asymptotics", 0.0, [&] {
    std::vector<double> x;
    std::vector<double> y;
    for (double f : {4.0, 8.0, 16.0, 32.0}) {
      const cplx k(0.0, f * g.c());
      const double d = std::abs(A.raw(k) - 0.25 + gamma / k);
      x.push_back(std::log(f * g.c()));
      y.push_back(std::log(d));
    }
    const double xb = std::accumulate(x.begin(), x.end(), 0.0) / 4.0;
    const double yb = std::accumulate(y.begin(), y.end(), 0.0) / 4.0;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - xb) * (y[i] - yb);
      sxx += (x[i] - xb) * (x[i] - xb);
    }
    const double slope = sxy / sxx;
    ResidualReport r = make_report("abel.asymptotics", {std::max(0.0, slope - tol.asymptotic_slope)}, 0.0);
    r.add("slope", slope);
    r.add("slope_bound", tol.asymptotic_slope);
    return finish(r);
  });

  run(out, "gamma_tilde.jump_ratio", tol.symmetry, [&] {
    std::mt19937_64 rng(seed + 203u);
    std::vector<double> res;
    const double d = 1e-3 * g.c();
    std::uniform_real_distribution<double> u(g.a() + d, g.c() - d);
    for (int i = 0; i < 100; ++i) {
      const double y = u(rng);
      for (double s : {1.0, -1.0}) {
        const cplx p = gamma_tilde(BoundaryPoint{I * s * y, Side::plus}, g);
        const cplx m = gamma_tilde(BoundaryPoint{I * s * y, Side::minus}, g);
        res.push_back(std::abs(p / m - s * I));
      }
    }
    return finish(make_report("gamma_tilde.jump_ratio", res, tol.symmetry));
  });

  run(out, "gamma_tilde.parity_positivity", tol.symmetry, [&] {
    std::mt19937_64 rng(seed + 204u);
    std::vector<double> res;
    for (cplx k : random_plane_points(g, 50, rng)) {
      const cplx v = gamma_tilde(k, g);
      res.push_back(std::abs(gamma_tilde(-k, g) - v) / std::abs(v));
    }
    std::uniform_real_distribution<double> u(0.0, 4.0);
    for (int i = 0; i < 50; ++i) {
      for (cplx k : {cplx(u(rng) * g.c(), 0.0), cplx(0.0, (1.01 + u(rng)) * g.c())}) {
        const cplx v = gamma_tilde(k, g);
        res.push_back(v.real() > 0.0 ? std::abs(v.imag()) / std::abs(v) : 1.0);
      }
    }
    return finish(make_report("gamma_tilde.parity_positivity", res, tol.symmetry));
  });

  run(out, "w.boundary_values", 1e-12, [&] {
    std::mt19937_64 rng(seed + 205u);
    std::vector<double> res;
    std::uniform_real_distribution<double> u(-0.999, 0.999);
    for (int i = 0; i < 300; ++i) {
      const double y = u(rng) * g.c();
      if (distance_to_branch_points(cplx(0.0, y), g) < 1e-3 * g.c()) continue;
      const cplx p = w_eval(BoundaryPoint{I * y, Side::plus}, g);
      const cplx m = w_eval(BoundaryPoint{I * y, Side::minus}, g);
      // w is continuous across the middle and changes sign across the cuts.
      const bool middle = std::abs(y) < g.a();
      res.push_back(std::abs(middle ? p - m : p + m) / scale1(std::abs(p)));
    }
    return finish(make_report("w.boundary_values", res, 1e-12));
  });
}

void torus_reports(std::vector<ResidualReport>& out, const ModelSolutions& ms, const Tolerances& tol,
                   unsigned seed) {
  const SurfaceContext& ctx = ms.context();
  const GapSpec& g = ctx.gap();
  const TorusPeriods& P = ctx.periods();
  const PhaseParam lam = ms.lambda();
  auto finish = [&](ResidualReport r) {
    add_common(r, g, lam, seed);
    return r;
  };
  const std::vector<std::pair<std::string, const QuasiFn*>> fns{
      {"E_s", &ms.e_s()}, {"E_a", &ms.e_a()}, {"E_a_hat", &ms.e_a_hat()}};

  for (const auto& [name, e] : fns) {
    run(out, "torus.quasi_periodicity." + name, 1e-11, [&, name = name, e = e] {
      const std::vector<cplx> pts = regular_points(*e, 20, seed + 301u);
      return finish(make_report("torus.quasi_periodicity." + name, {quasi_periodicity_residual(*e, pts)}, 1e-11));
    });
    run(out, "torus.half_period." + name, 1e-12, [&, name = name, e = e] {
      const double sign = e->symmetry() == Symmetry::symmetric ? 1.0 : -1.0;
      std::vector<double> res;
      for (cplx z : regular_points(*e, 20, seed + 302u)) {
        const cplx v = (*e)(z);
        res.push_back(std::abs((*e)(z + 0.5) - sign * v) / scale1(std::abs(v)));
      }
      return finish(make_report("torus.half_period." + name, res, 1e-12));
    });
    run(out, "torus.classify." + name, 0.0, [&, name = name, e = e] {
      const Symmetry want = name == "E_s" ? Symmetry::symmetric : Symmetry::anti_symmetric;
      const Symmetry got = classify_symmetry(*e);
      ResidualReport r = make_report("torus.classify." + name, {got == want ? 0.0 : 1.0}, 0.0);
      r.add("symmetry", std::string(to_string(got)));
      return finish(r);
    });
    run(out, "torus.argument_principle." + name, tol.abel_condition, [&, name = name, e = e] {
      const CellCount cc = argument_principle(*e, choose_cell_base(*e));
      ResidualReport r = make_report("torus.argument_principle." + name,
                                     {std::abs(cc.winding - std::round(cc.winding)),
                                      lattice_distance(cc.moment - lam.value(), P.tau)},
                                     tol.abel_condition);
      r.add("winding", cc.winding);
      return finish(r);
    });
    run(out, "torus.divisor_rebuild." + name, tol.ratio, [&, name = name, e = e] {
      if (!e->divisor()) throw Error(ErrorKind::invalid_argument, "function has no recorded divisor");
      const QuasiFn f = build_from_divisor(*e->divisor(), lam, P);
      std::vector<cplx> ratios;
      for (cplx z : regular_points(*e, 20, seed + 303u)) {
        if (f.pole_distance(z) < 0.05) continue;
        ratios.push_back(f(z) / (*e)(z));
      }
      return finish(make_report("torus.divisor_rebuild." + name, {stdev_over_mean(ratios)}, tol.ratio));
    });
  }

  run(out, "torus.compact_form", 1e-12, [&] {
    std::vector<double> res;
    for (cplx z : regular_points(ms.e_s(), 50, seed + 304u)) {
      const cplx v = ms.e_s()(z);
      res.push_back(std::abs(canonical_symmetric_compact(z, lam, P) - v) / scale1(std::abs(v)));
    }
    return finish(make_report("torus.compact_form", res, 1e-12));
  });

  if (lam.is_integer()) {
    run(out, "torus.trivial_phase", 1e-12, [&] {
      std::vector<double> res;
      for (cplx z : regular_points(ms.e_s(), 20, seed + 305u)) res.push_back(std::abs(ms.e_s()(z) - 1.0));
      return finish(make_report("torus.trivial_phase", res, 1e-12));
    });
  }

  run(out, "torus.abel_condition_rejection", 0.0, [&] {
    Divisor d = *ms.e_s().divisor();
    d.zeros.front().z += 0.1 + 0.05 * P.tau;
    double caught = 1.0;
    try {
      (void)build_from_divisor(d, lam, P);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::abel_condition_violated) caught = 0.0;
    }
    return finish(make_report("torus.abel_condition_rejection", {caught}, 0.0));
  });

  run(out, "torus.decomposition", tol.decomposition, [&] {
    std::mt19937_64 rng(seed + 306u);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> res;
    for (int i = 0; i < 3; ++i) {
      const cplx cs(u(rng), u(rng));
      const cplx ca(u(rng), u(rng));
      const QuasiFn e = ms.e_s().scaled(cs).plus(ms.e_a().scaled(ca));
      const Decomposition dec = decompose(e, lam, P);
      res.push_back((std::abs(dec.c_s - cs) + std::abs(dec.c_a - ca)) / (std::abs(cs) + std::abs(ca)));
    }
    return finish(make_report("torus.decomposition", res, tol.decomposition));
  });

  run(out, "torus.wrong_poles_rejected", 0.0, [&] {
    double caught = 1.0;
    try {
      (void)decompose(ms.e_a_hat(), lam, P);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::pole_mismatch) caught = 0.0;
    }
    return finish(make_report("torus.wrong_poles_rejected", {caught}, 0.0));
  });

  // Pairs built on the poles of each canonical function reproduce it up to a constant.
  const cplx K = riemann_constant(P);
  const std::vector<std::tuple<std::string, const QuasiFn*, cplx, int>> pairs{
      {"E_s", &ms.e_s(), -K - 0.5, 0}, {"E_a", &ms.e_a(), -K - 0.5, 1}, {"E_a_hat", &ms.e_a_hat(), -K - 0.25, 1}};
  for (const auto& [name, e, p1, parity] : pairs) {
    const std::string id = "torus.symmetric_pair." + name;
    run(out, id, tol.ratio, [&, id, e = e, p1 = p1, parity = parity] {
      const QuasiFn f = build_symmetric_pair(p1, parity, lam, P);
      std::vector<cplx> ratios;
      for (cplx z : regular_points(*e, 20, seed + 307u)) {
        if (f.pole_distance(z) < 0.05) continue;
        ratios.push_back(f(z) / (*e)(z));
      }
      return finish(make_report(id, {stdev_over_mean(ratios)}, tol.ratio));
    });
  }

  auto closed_form = [&](const std::string& name, NKind kind, std::function<cplx(cplx, Sheet)> weight) {
    run(out, name, tol.ratio, [&, kind, weight] {
      std::mt19937_64 rng(seed + 308u);
      std::vector<double> res;
      for (Sheet s : {Sheet::upper, Sheet::lower}) {
        std::vector<cplx> ratios;
        for (cplx k : random_plane_points(g, 20, rng)) {
          if (kind == NKind::anti_origin && std::abs(k) < 0.05 * g.c()) continue;
          ratios.push_back(ms.n_value(kind, SheetPoint{k, s}) * weight(k, s));
        }
        res.push_back(stdev_over_mean(ratios));
      }
      return finish(make_report(name, res, tol.ratio));
    });
  };
  if (lam.is_half_integer()) {
    closed_form("torus.closed_form.N_s", NKind::sym, [&](cplx k, Sheet) { return root_middle(k, g) / k; });
    closed_form("torus.closed_form.N_a", NKind::anti, [&](cplx k, Sheet) { return root_middle(k, g); });
  }
  if (lam.is_integer()) {
    closed_form("torus.closed_form.N_a", NKind::anti,
                [&](cplx k, Sheet s) { return w_eval(SheetPoint{k, s}, g) / (k * k + g.c() * g.c()); });
    closed_form("torus.closed_form.N_a_hat", NKind::anti_origin,
                [](cplx k, Sheet) { return k; });
  }
}

// The n smallest radii of the ladder at which all four fit rays evaluate.
std::vector<double> usable_radii(const std::function<double(cplx)>& norm_at, cplx center,
                                 const std::vector<double>& ladder, std::size_t n) {
  std::vector<double> ok;
  for (double r : ladder) {
    try {
      for (int j = 0; j < 4; ++j) (void)norm_at(center + r * std::exp(I * (pi / 4.0 + j * pi / 2.0)));
      ok.push_back(r);
    } catch (const Error&) {
    }
  }
  std::sort(ok.begin(), ok.end());
  if (ok.size() > n) ok.resize(n);
  return ok;
}

template <class F>
std::vector<double> at_points(const std::vector<PreparedPoint>& pts, F&& f) {
  std::vector<double> r;
  for (const PreparedPoint& p : pts) r.push_back(f(p));
  return r;
}

void model_reports(std::vector<ResidualReport>& out, const ModelSolutions& ms, const PreparedPlan& plan,
                   const Tolerances& tol, unsigned seed) {
  const SurfaceContext& ctx = ms.context();
  const GapSpec& g = ctx.gap();
  const PhaseParam lam = ms.lambda();
  const bool m3_defined = !lam.is_integer();
  auto finish = [&](ResidualReport r) {
    add_common(r, g, lam, seed);
    return r;
  };
  const cplx S = ms.n_infinity(NKind::sym);
  const cplx T = ms.n_infinity(NKind::anti);

  std::mt19937_64 rng(seed + 401u);
  std::vector<PreparedPoint> pts;
  std::vector<PreparedPoint> neg;
  for (cplx k : random_plane_points(g, 20, rng)) {
    pts.push_back(ctx.prepare(k));
    neg.push_back(ctx.prepare(-k));
  }

  run(out, "model.n_infinity", 0.0, [&] {
    ResidualReport r = make_report("model.n_infinity", {std::abs(S) > 1e-12 ? 0.0 : 1.0}, 0.0);
    r.add("S_re", S.real());
    r.add("S_im", S.imag());
    r.add("T_re", T.real());
    r.add("T_im", T.imag());
    return finish(r);
  });

  for (const FieldSpec& f : solution_fields(ms)) {
    run(out, "jump." + f.name, tol.jump, [&] { return certify_jump(f, plan, g, lam, tol.jump); });
  }
  if (!m3_defined) out.push_back(undefined_report("jump.M3", tol.jump));

  run(out, "symmetry.m", tol.symmetry, [&] {
    std::vector<double> res;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec2 a = ms.m(pts[i]);
      res.push_back(norm(sub(ms.m(neg[i]), Vec2{a[1], a[0]})) / scale1(norm(a)));
    }
    return finish(make_report("symmetry.m", res, tol.symmetry));
  });
  run(out, "symmetry.M1", tol.symmetry, [&] {
    std::vector<double> res;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Mat2 a = ms.m1(pts[i]);
      res.push_back(norm(sub(ms.m1(neg[i]), mul(sigma1(), mul(a, sigma1())))) / scale1(norm(a)));
    }
    return finish(make_report("symmetry.M1", res, tol.symmetry));
  });
  run(out, "symmetry.M2", tol.symmetry, [&] {
    std::vector<double> res;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Mat2 a = ms.m2(pts[i]);
      res.push_back(norm(sub(ms.m2(neg[i]), mul(sigma3(), mul(a, sigma1())))) / scale1(norm(a)));
    }
    return finish(make_report("symmetry.M2", res, tol.symmetry));
  });
  if (m3_defined) {
    run(out, "symmetry.M3", tol.symmetry, [&] {
      std::vector<double> res;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const Mat2 a = ms.m3(pts[i]);
        res.push_back(norm(sub(ms.m3(neg[i]), mul(sigma1(), mul(a, sigma1())))) / scale1(norm(a)));
      }
      return finish(make_report("symmetry.M3", res, tol.symmetry));
    });
  } else {
    out.push_back(undefined_report("symmetry.M3", tol.symmetry));
  }

  // Limits along k = iR, R ∈ {100, 200, 400, 800}c, extrapolated in 1/R.
  std::vector<double> x;
  std::vector<PreparedPoint> far;
  for (double f : {100.0, 200.0, 400.0, 800.0}) {
    x.push_back(1.0 / (f * g.c()));
    far.push_back(ctx.prepare(cplx(0.0, f * g.c())));
  }
  run(out, "normalization.m", tol.normalization, [&] {
    std::vector<Vec2> v;
    for (const PreparedPoint& p : far) v.push_back(ms.m(p));
    const Vec2 lim = extrapolate_to_zero(x, v);
    ResidualReport r = make_report("normalization.m", {norm(sub(lim, Vec2{1.0, 1.0}))}, tol.normalization);
    r.add("raw_residual_at_100c", norm(sub(v.front(), Vec2{1.0, 1.0})));
    return finish(r);
  });
  run(out, "normalization.M1", tol.normalization, [&] {
    std::vector<Mat2> v;
    for (const PreparedPoint& p : far) v.push_back(ms.m1(p));
    const Mat2 lim = extrapolate_to_zero(x, v);
    const Mat2 want{{{S * T, 0.0}, {0.0, S * T}}};
    return finish(make_report("normalization.M1", {norm(sub(lim, want)) / scale1(std::abs(S * T))}, tol.normalization));
  });
  if (m3_defined) {
    run(out, "normalization.M3", tol.normalization, [&] {
      std::vector<Mat2> v;
      for (const PreparedPoint& p : far) v.push_back(ms.m3(p));
      return finish(make_report("normalization.M3", {norm(sub(extrapolate_to_zero(x, v), identity2()))},
                                tol.normalization));
    });
  } else {
    out.push_back(undefined_report("normalization.M3", tol.normalization));
  }

  run(out, "det.M1", tol.algebraic, [&] {
    const cplx want = S * T * S * T;
    ResidualReport r;
    if (lam.is_half_integer()) {
      // S·T vanishes: det M1 ≡ 0.
      r = make_report("det.M1", at_points(pts, [&](const PreparedPoint& p) { return std::abs(det(ms.m1(p))); }),
                      tol.algebraic);
      r.add("rule", std::string("vanishing"));
    } else {
      r = make_report("det.M1", at_points(pts, [&](const PreparedPoint& p) {
                        return std::abs(det(ms.m1(p)) - want) / scale1(std::abs(want));
                      }),
                      tol.algebraic);
      r.add("rule", std::string("(S*T)^2"));
    }
    return finish(r);
  });
  run(out, "det.M2", tol.algebraic, [&] {
    const cplx want = -2.0 * S * T;
    return finish(make_report("det.M2", at_points(pts, [&](const PreparedPoint& p) {
                                return std::abs(det(ms.m2(p)) - want) / scale1(std::abs(want));
                              }),
                              tol.algebraic));
  });
  run(out, "det.M2.origin", tol.algebraic, [&] {
    // Value at k = 0 from the boundary value and from the closed form in the
    // theta functions at A(0₊) = 1/4 + τ/2.
    const cplx tau = ctx.periods().tau;
    const cplx z0 = 0.25 + 0.5 * tau;
    const cplx g0 = gamma_tilde(cplx(0.0, 0.0), g);
    const cplx closed = -2.0 * g0 * g0 * std::exp(-2.0 * pi * I * lam.value()) * ms.e_s()(z0) * ms.e_a()(z0);
    const cplx boundary = det(ms.m2(ctx.prepare(BoundaryPoint{0.0, Side::plus})));
    const cplx want = -2.0 * S * T;
    const double sc = scale1(std::abs(want));
    ResidualReport r = make_report("det.M2.origin", {std::abs(closed - want) / sc, std::abs(boundary - want) / sc},
                                   tol.algebraic);
    r.add("closed_form_re", closed.real());
    r.add("closed_form_im", closed.imag());
    return finish(r);
  });
  if (m3_defined) {
    run(out, "det.M3", tol.algebraic, [&] {
      return finish(make_report(
          "det.M3", at_points(pts, [&](const PreparedPoint& p) { return std::abs(det(ms.m3(p)) - 1.0); }),
          tol.algebraic));
    });
  } else {
    out.push_back(undefined_report("det.M3", tol.algebraic));
  }

  // The 0/0 limit at half-integer phases is a central difference in Λ̃.
  const double m1_tol = lam.is_half_integer(1e-9) ? 1e-6 : tol.algebraic;
  run(out, "consistency.m_from_m1", m1_tol, [&] {
    return finish(make_report("consistency.m_from_m1", at_points(pts, [&](const PreparedPoint& p) {
                                const Vec2 a = ms.m(p);
                                return norm(sub(ms.m_from_m1(p), a)) / scale1(norm(a));
                              }),
                              m1_tol));
  });
  run(out, "consistency.m_from_m2", tol.algebraic, [&] {
    return finish(make_report("consistency.m_from_m2", at_points(pts, [&](const PreparedPoint& p) {
                                const Mat2 M = ms.m2(p);
                                const Vec2 a = ms.m(p);
                                return norm(sub(Vec2{M[0][0] / S, M[0][1] / S}, a)) / scale1(norm(a));
                              }),
                              tol.algebraic));
  });

  // Local behavior at the branch points: ‖m‖ ~ r^{-1/4}, bounded at ±ia when Λ̃ ∈ ℤ.
  for (cplx kappa : {I * g.c(), I * g.a(), -I * g.a(), -I * g.c()}) {
    const bool inner = std::abs(std::abs(kappa) - g.a()) < 1e-15;
    const std::string name = std::string("singularity.m.") + (kappa.imag() > 0 ? "+" : "-") + (inner ? "ia" : "ic");
    run(out, name, tol.exponent_window, [&, kappa, inner, name] {
      const double l = sampling_scale(g);
      auto f = [&](cplx k) { return norm(ms.m(ctx.prepare(k))); };
      const std::vector<double> radii = usable_radii(f, kappa, {1e-2 * l, 1e-3 * l, 1e-4 * l, 1e-5 * l, 1e-6 * l, 1e-7 * l}, 4);
      if (inner && lam.is_integer()) {
        double missed = 1.0;
        try {
          (void)fit_singularity(f, kappa, radii);
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::degenerate_fit) missed = 0.0;
        }
        ResidualReport r = make_report(name, {missed}, 0.0);
        r.add("expected", std::string("DegenerateFit"));
        return finish(r);
      }
      const ExponentFit fit = fit_singularity(f, kappa, radii);
      ResidualReport r = make_report(name, {std::abs(fit.exponent + 0.25)}, tol.exponent_window);
      r.add("exponent", fit.exponent);
      r.add("confidence", fit.confidence);
      r.add("radii", fit.radii);
      return finish(r);
    });
  }
  if (m3_defined) {
    run(out, "singularity.M3.origin", tol.exponent_window, [&] {
      // The nearest branch points are ±ia.
      const double l = g.a();
      auto f = [&](cplx k) { return norm(ms.m3(ctx.prepare(k))); };
      const ExponentFit fit = fit_singularity(f, 0.0, usable_radii(f, 0.0, {1e-1 * l, 1e-2 * l, 1e-3 * l, 1e-4 * l}, 3));
      ResidualReport r = make_report("singularity.M3.origin", {std::abs(fit.exponent + 1.0)}, tol.exponent_window);
      r.add("exponent", fit.exponent);
      r.add("radii", fit.radii);
      return finish(r);
    });
  } else {
    out.push_back(undefined_report("singularity.M3.origin", tol.exponent_window));
  }
}

}  // namespace

std::vector<ResidualReport> full_suite(const std::shared_ptr<const SurfaceContext>& ctx, const PreparedPlan& plan,
                                       PhaseParam lam, unsigned seed, const SuiteOptions& opt) {
  std::vector<ResidualReport> out;
  theta_reports(out, opt.tol, seed);
  period_reports(out, *ctx, opt.tol, lam, seed);
  abel_reports(out, *ctx, opt.tol, lam, seed);
  try {
    const ModelSolutions ms(ctx, lam);
    torus_reports(out, ms, opt.tol, seed);
    model_reports(out, ms, plan, opt.tol, seed);
    for (ResidualReport& r : vanishing_witness(ms, plan, opt.tol, seed)) out.push_back(std::move(r));
    if (opt.include_corruption) {
      for (ResidualReport& r : corruption_sweep(ms, plan, 0.01, opt.tol.jump)) out.push_back(std::move(r));
    }
  } catch (const std::exception& e) {
    out.push_back(error_report("model.construction", 0.0, e));
  }
  return out;
}

std::vector<ResidualReport> full_suite(const GapSpec& g, PhaseParam lam, unsigned seed, const SuiteOptions& opt) {
  std::vector<ResidualReport> out;
  std::shared_ptr<const SurfaceContext> ctx;
  try {
    ctx = std::make_shared<const SurfaceContext>(g);
  } catch (const std::exception& e) {
    out.push_back(error_report("surface.construction", 0.0, e));
    return out;
  }
  const PreparedPlan plan = prepare_plan(*ctx, make_contour_plan(g, opt.contour_points, seed));
  return full_suite(ctx, plan, lam, seed, opt);
}

}  // namespace torus_rh
