#include <doctest.h>

#include <cmath>

#include "torus_rh/torus_fn.hpp"

using namespace torus_rh;

namespace {

const TorusPeriods& per12() {
  static const TorusPeriods p = compute_periods(GapSpec(1.0, 2.0));
  return p;
}

double ratio_spread(const QuasiFn& f, const QuasiFn& e, unsigned seed) {
  std::vector<cplx> r;
  for (cplx z : regular_points(e, 20, seed)) {
    if (f.pole_distance(z) < 0.05) continue;
    r.push_back(f(z) / e(z));
  }
  cplx mean = 0.0;
  for (cplx v : r) mean += v;
  mean /= static_cast<double>(r.size());
  double m = 0.0;
  for (cplx v : r) m = std::max(m, std::abs(v - mean));
  return m / std::abs(mean);
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::invalid_argument;
}

}  // namespace

TEST_CASE("phase parameter") {
  CHECK(PhaseParam(2.0).is_integer());
  CHECK(PhaseParam(-0.5).is_half_integer());
  CHECK_FALSE(PhaseParam(0.3).is_integer());
  CHECK(PhaseParam(1.3).reduced() == doctest::Approx(0.3));
  CHECK(PhaseParam(-0.25).reduced() == doctest::Approx(0.75));
  CHECK_THROWS_AS(PhaseParam(std::nan("")), Error);
}

TEST_CASE("canonical functions at the frozen reference point") {
  // S = E_s(1/4), T = E_a(1/4), T̂ = Ê_a(1/4) from mpmath theta quotients.
  struct Row {
    double lam;
    cplx S, T, That;
  };
  for (const Row& r : {Row{0.0, 1.0, cplx(0.0, -1.93122805447877718), 0.0},
                       Row{0.3, 0.954579926235054555, cplx(0.0, -1.13418775029570592), cplx(0.0, 1.67815490833888065)},
                       Row{0.5, 0.930604859102099599, 0.0, cplx(0.0, 2.075239598836971095)},
                       Row{0.1, 0.993373214525565245, cplx(0.0, -1.83648049030877131), cplx(0.0, 0.640535109095179466)}}) {
    const PhaseParam lam(r.lam);
    CHECK(std::abs(canonical_symmetric(lam, per12())(0.25) - r.S) < 1e-13);
    CHECK(std::abs(canonical_antisymmetric(lam, per12())(0.25) - r.T) < 1e-13);
    CHECK(std::abs(canonical_antisymmetric_origin_pole(lam, per12())(0.25) - r.That) < 1e-13);
  }
}

TEST_CASE("quasi-periodicity and half-period symmetry") {
  for (double l : {0.0, 0.1, 0.3, 0.5, 0.9, 1.7}) {
    const PhaseParam lam(l);
    const QuasiFn es = canonical_symmetric(lam, per12());
    const QuasiFn ea = canonical_antisymmetric(lam, per12());
    const QuasiFn eh = canonical_antisymmetric_origin_pole(lam, per12());
    for (const QuasiFn* e : {&es, &ea, &eh}) {
      const auto pts = regular_points(*e, 20, 9);
      CHECK(quasi_periodicity_residual(*e, pts) < 1e-11);
    }
    for (cplx z : regular_points(es, 10, 4)) {
      CHECK(std::abs(es(z + 0.5) - es(z)) < 1e-12 * std::max(1.0, std::abs(es(z))));
      CHECK(std::abs(canonical_symmetric_compact(z, lam, per12()) - es(z)) < 1e-12 * std::max(1.0, std::abs(es(z))));
    }
    for (cplx z : regular_points(ea, 10, 4)) {
      CHECK(std::abs(ea(z + 0.5) + ea(z)) < 1e-12 * std::max(1.0, std::abs(ea(z))));
    }
    CHECK(classify_symmetry(es) == Symmetry::symmetric);
    CHECK(classify_symmetry(ea) == Symmetry::anti_symmetric);
    CHECK(classify_symmetry(eh) == Symmetry::anti_symmetric);
  }
}

TEST_CASE("trivial phase gives the constant function") {
  const QuasiFn es = canonical_symmetric(PhaseParam(0.0), per12());
  for (cplx z : regular_points(es, 20, 2)) CHECK(std::abs(es(z) - 1.0) < 1e-12);
}

TEST_CASE("divisor constructor validates its input") {
  const PhaseParam lam(0.3);
  Divisor d;
  d.zeros = {{0.1, 1}};
  d.poles = {{0.2, 1}, {0.4, 1}};
  CHECK(kind_of([&] { (void)build_from_divisor(d, lam, per12()); }) == ErrorKind::divisor_mismatch);
  d.zeros = {{0.1, 1}, {0.25, 1}};
  CHECK(kind_of([&] { (void)build_from_divisor(d, lam, per12()); }) == ErrorKind::abel_condition_violated);
  // Zeros summing to poles + Λ̃.
  d.zeros = {{0.1, 1}, {0.8, 1}};
  const QuasiFn e = build_from_divisor(d, lam, per12(), 2.0);
  CHECK(quasi_periodicity_residual(e, regular_points(e, 10, 1)) < 1e-11);
  CHECK(std::abs(e(0.1)) < 1e-12);
  CHECK(e.normalization() == cplx(2.0));
}

TEST_CASE("pole guard") {
  const QuasiFn es = canonical_symmetric(PhaseParam(0.3), per12());
  const cplx K = riemann_constant(per12());
  const cplx pole = -K;  // β = 0 shifted by K
  CHECK(es.evaluate(pole + 1e-8).near_pole);
  CHECK(kind_of([&] { (void)es(pole + 1e-8); }) == ErrorKind::pole_proximity);
  CHECK_FALSE(es.evaluate(pole + 0.1).near_pole);
}

TEST_CASE("argument principle counts") {
  for (double l : {0.3, 0.5}) {
    const PhaseParam lam(l);
    for (const QuasiFn& e : {canonical_symmetric(lam, per12()), canonical_antisymmetric(lam, per12())}) {
      const CellCount cc = argument_principle(e, choose_cell_base(e));
      CHECK(std::abs(cc.winding) < 1e-8);
      CHECK(lattice_distance(cc.moment - l, per12().tau) < 1e-8);
    }
  }
}

TEST_CASE("decomposition into the symmetric basis") {
  const PhaseParam lam(0.3);
  const QuasiFn es = canonical_symmetric(lam, per12());
  const QuasiFn ea = canonical_antisymmetric(lam, per12());
  const cplx cs(0.7, -1.1);
  const cplx ca(-0.4, 2.3);
  const Decomposition d = decompose(es.scaled(cs).plus(ea.scaled(ca)), lam, per12());
  CHECK(std::abs(d.c_s - cs) < 1e-10);
  CHECK(std::abs(d.c_a - ca) < 1e-10);
  CHECK(kind_of([&] { (void)decompose(canonical_antisymmetric_origin_pole(lam, per12()), lam, per12()); }) ==
        ErrorKind::pole_mismatch);
}

TEST_CASE("symmetric pairs reproduce the canonical functions") {
  const cplx K = riemann_constant(per12());
  for (double l : {0.1, 0.3, 0.9}) {
    const PhaseParam lam(l);
    CHECK(ratio_spread(build_symmetric_pair(-K - 0.5, 0, lam, per12()), canonical_symmetric(lam, per12()), 3) < 1e-9);
    CHECK(ratio_spread(build_symmetric_pair(-K - 0.5, 1, lam, per12()), canonical_antisymmetric(lam, per12()), 3) < 1e-9);
    CHECK(ratio_spread(build_symmetric_pair(-K - 0.25, 1, lam, per12()),
                       canonical_antisymmetric_origin_pole(lam, per12()), 3) < 1e-9);
  }
  CHECK_THROWS_AS(build_symmetric_pair(0.1, 2, PhaseParam(0.3), per12()), Error);
}

TEST_CASE("ratio without a fixed half-period factor is not symmetric") {
  Divisor d;
  d.zeros = {{0.1, 1}, {0.8, 1}};
  d.poles = {{0.2, 1}, {0.4, 1}};
  const QuasiFn e = build_from_divisor(d, PhaseParam(0.3), per12());
  CHECK(e.symmetry() == Symmetry::none);
  CHECK(classify_symmetry(e) == Symmetry::none);
}

TEST_CASE("regular points are deterministic") {
  const QuasiFn es = canonical_symmetric(PhaseParam(0.3), per12());
  const auto a = regular_points(es, 15, 77);
  const auto b = regular_points(es, 15, 77);
  REQUIRE(a.size() == 15);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(es.pole_distance(a[i]) >= 0.05);
  }
}
