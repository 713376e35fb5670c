#include <doctest.h>

#include <cmath>

#include "torus_rh/verifier.hpp"

using namespace torus_rh;

namespace {

const ResidualReport* find(const std::vector<ResidualReport>& rs, const std::string& name) {
  for (const ResidualReport& r : rs) {
    if (r.identity_name == name) return &r;
  }
  return nullptr;
}

const MetaValue* meta(const ResidualReport& r, const std::string& key) {
  for (const auto& [k, v] : r.metadata) {
    if (k == key) return &v;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("report construction") {
  const ResidualReport r = make_report("x", {1e-12, 3e-12, 2e-12}, 5e-12);
  CHECK(r.pass);
  CHECK(r.sample_count == 3);
  CHECK(r.max_residual == 3e-12);
  CHECK(r.mean_residual == doctest::Approx(2e-12));
  CHECK_FALSE(make_report("y", {1.0, std::nan("")}, 10.0).pass);
}

TEST_CASE("tolerance overrides") {
  Tolerances t;
  t.set("jump", 1e-3);
  CHECK(t.jump == 1e-3);
  CHECK_THROWS_AS(t.set("nope", 1.0), Error);
  CHECK_THROWS_AS(t.set("jump", -1.0), Error);
  for (const std::string& k : Tolerances::keys()) CHECK_NOTHROW(t.set(k, 0.5));
}

TEST_CASE("extrapolation is exact on polynomials") {
  const std::vector<double> x{1e-3, 1e-4, 1e-5};
  std::vector<Vec2> f;
  for (double v : x) f.push_back({cplx(2.0 + 3.0 * v - v * v, 1.0), cplx(0.0, -5.0 * v)});
  const Vec2 z = extrapolate_to_zero(x, f);
  CHECK(std::abs(z[0] - cplx(2.0, 1.0)) < 1e-12);
  CHECK(std::abs(z[1]) < 1e-12);
}

TEST_CASE("exponent fit") {
  const std::vector<double> radii{1e-2, 1e-3, 1e-4};
  const ExponentFit f = fit_singularity([](cplx k) { return 3.0 * std::pow(std::abs(k - 1.0), -0.5); }, 1.0, radii);
  CHECK(f.exponent == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(f.confidence == doctest::Approx(1.0));
  try {
    (void)fit_singularity([](cplx) { return 2.0; }, 0.0, radii);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_fit);
  }
  CHECK_THROWS_AS(fit_singularity([](cplx) { return 1.0; }, 0.0, {1e-2, 1e-3}), Error);
}

TEST_CASE("contour plans") {
  const GapSpec g(0.95, 1.0);
  const ContourPlan p = make_contour_plan(g, 40, 3);
  REQUIRE(p.y.size() == 40);
  int upper = 0;
  int lower = 0;
  for (double y : p.y) {
    CHECK(distance_to_branch_points(cplx(0.0, y), g) >= p.margin);
    upper += y > g.a();
    lower += y < -g.a();
  }
  CHECK(upper == 10);
  CHECK(lower == 10);
  const SurfaceContext ctx(g);
  // Offsets larger than a tenth of the margin leave points too close to G.
  try {
    (void)prepare_plan(ctx, p, {1e-2});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::sampling_too_close);
  }
}

TEST_CASE("full suite at a generic phase") {
  SuiteOptions opt;
  opt.contour_points = 80;
  const auto rs = full_suite(GapSpec(1.0, 2.0), PhaseParam(0.3), 7, opt);
  for (const ResidualReport& r : rs) {
    INFO(r.identity_name);
    CHECK(r.pass);
  }
  REQUIRE(find(rs, "jump.M3") != nullptr);
  CHECK(find(rs, "jump.M3")->status == ReportStatus::evaluated);
  const ResidualReport* j = find(rs, "jump.m");
  REQUIRE(j != nullptr);
  CHECK(j->sample_count == 80);
  CHECK(std::get<std::vector<double>>(*meta(*j, "epsilon")).size() == 3);
}

TEST_CASE("full suite at the degenerate phases") {
  SuiteOptions opt;
  opt.contour_points = 40;
  opt.include_corruption = false;
  const auto half = full_suite(GapSpec(1.0, 2.0), PhaseParam(0.5), 7, opt);
  CHECK(all_pass(half));
  REQUIRE(find(half, "det.M1") != nullptr);
  CHECK(std::get<std::string>(*meta(*find(half, "det.M1"), "rule")) == "vanishing");
  const auto zero = full_suite(GapSpec(1.0, 2.0), PhaseParam(0.0), 7, opt);
  CHECK(all_pass(zero));
  for (const char* n : {"jump.M3", "det.M3", "normalization.M3", "singularity.M3.origin"}) {
    REQUIRE(find(zero, n) != nullptr);
    CHECK(find(zero, n)->status == ReportStatus::undefined_phase);
  }
  REQUIRE(find(zero, "singularity.m.+ia") != nullptr);
  CHECK(std::get<std::string>(*meta(*find(zero, "singularity.m.+ia"), "expected")) == "DegenerateFit");
}

TEST_CASE("a corrupted solution fails its jump report") {
  const auto ctx = std::make_shared<const SurfaceContext>(GapSpec(1.0, 2.0));
  const PreparedPlan plan = prepare_plan(*ctx, make_contour_plan(ctx->gap(), 40, 1));
  const ModelSolutions ms(ctx, PhaseParam(0.3));
  const auto rs = corruption_sweep(ms, plan, 0.01, 1e-7);
  CHECK(rs.size() == 16);  // m 2, M1 4, M2 4, M3 4, witness 2
  CHECK(all_pass(rs));
  for (const FieldSpec& f : solution_fields(ms)) CHECK(certify_jump(f, plan, ctx->gap(), ms.lambda(), 1e-7).pass);
}

TEST_CASE("unreachable tolerance fails") {
  SuiteOptions opt;
  opt.contour_points = 20;
  opt.include_corruption = false;
  opt.tol.set("jump", 1e-30);
  const auto rs = full_suite(GapSpec(1.0, 2.0), PhaseParam(0.3), 7, opt);
  CHECK_FALSE(find(rs, "jump.m")->pass);
  CHECK_FALSE(all_pass(rs));
}
