#include <doctest.h>

#include <random>
#include <vector>

#include "torus_rh/simd/theta_kernels.hpp"
#include "torus_rh/theta.hpp"

using namespace torus_rh;

namespace {

double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("theta3 matches high-precision reference values") {
  // mpmath jtheta(3, πz, e^{iπτ}) at 30 digits.
  CHECK(rel(theta3(0.0, Modulus(cplx(0.0, 1.0))).value, 1.08643481121330801457531612151) < 1e-15);
  CHECK(rel(theta3(cplx(0.3, 0.2), Modulus(cplx(0.1, 1.1))).value,
            cplx(0.994709865916970298602665119358, -0.10364092190309150374417952149)) < 1e-14);
  CHECK(rel(theta3(cplx(-0.7, 0.45), Modulus(cplx(-0.35, 0.8))).value,
            cplx(-0.352664210842897505338158303917, -0.22248418248247187425642501386)) < 1e-14);
  CHECK(rel(theta3(cplx(0.125, -0.3), Modulus(cplx(0.0, 0.6))).value,
            cplx(1.72339983475195608556078034114, 0.713855584945811062119310931265)) < 1e-14);
}

TEST_CASE("quasi-periodicity, evenness and zeros") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> im(0.5, 1.5);
  std::uniform_int_distribution<long> sh(-3, 3);
  for (int i = 0; i < 300; ++i) {
    const Modulus tau(cplx(0.5 * u(rng), im(rng)));
    const Theta3 th(tau);
    const cplx z(u(rng), u(rng));
    const long n = sh(rng);
    const long l = sh(rng);
    const cplx f = theta3_shift_factor(z, tau, n, l);
    const cplx lhs = th(z + static_cast<double>(n) + static_cast<double>(l) * tau.value());
    CHECK(std::abs(lhs - f * th(z)) <= 1e-12 * std::abs(f) * std::max(1.0, std::abs(th(z))));
    CHECK(std::abs(th(-z) - th(z)) <= 1e-13 * std::max(1.0, std::abs(th(z))));
    const cplx K = 0.5 * (1.0 + tau.value());
    CHECK(std::abs(th(K)) < 1e-13);
    CHECK(theta3_double_modulus_identity_residual(z, tau) < 1e-12);
  }
}

TEST_CASE("truncation bound and term count") {
  const Theta3 th(Modulus(cplx(0.0, 0.05)));
  CHECK(th.tail_bound() <= 1e-17);
  CHECK(th.terms() > 10);
  const ThetaValue v = th.evaluate(cplx(0.2, 0.01));
  CHECK(v.truncation_bound <= 1e-13);
}

TEST_CASE("modulus outside the upper half-plane is rejected") {
  CHECK_THROWS_AS(Modulus(cplx(0.3, 0.0)), Error);
  try {
    (void)Theta3(Modulus(cplx(0.0, -1.0)));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::nonconvergent_modulus);
  }
}

TEST_CASE("argument reduction lands in the strip") {
  const Modulus tau(cplx(0.2, 0.7));
  for (cplx z : {cplx(3.7, 2.9), cplx(-5.1, -4.4), cplx(0.1, 0.1)}) {
    const ThetaReduction r = reduce_theta_argument(z, tau);
    CHECK(std::abs(r.z0.imag()) <= 0.5 * tau.imag() + 1e-15);
    const cplx back = r.z0 + static_cast<double>(r.n) + static_cast<double>(r.l) * tau.value();
    CHECK(std::abs(back - z) < 1e-13);
  }
}

TEST_CASE("batch evaluation equals pointwise evaluation") {
  const Theta3 th(Modulus(cplx(-0.1, 0.9)));
  std::vector<cplx> z;
  for (int i = 0; i < 37; ++i) z.emplace_back(0.13 * i - 2.0, 0.07 * i - 1.2);
  std::vector<cplx> out(z.size());
  th.evaluate(z, out);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::abs(out[i] - th(z[i])) <= 1e-14 * std::max(1.0, std::abs(out[i])));
}

TEST_CASE("scalar and AVX2 kernels agree") {
  if (!simd::avx2_available()) {
    MESSAGE("AVX2 not available on this CPU; scalar kernel only");
    return;
  }
#if defined(TORUS_RH_HAVE_AVX2_KERNEL)
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (cplx tau : {cplx(0.0, 1.0), cplx(0.3, 0.55), cplx(-0.45, 1.4), cplx(0.0, 0.1)}) {
    const simd::SeriesTable table = simd::make_series_table(tau);
    // Odd length exercises the tail after the vector loop.
    std::vector<cplx> z(101);
    for (cplx& v : z) v = cplx(u(rng), u(rng) * tau.imag());
    std::vector<cplx> a(z.size());
    std::vector<cplx> b(z.size());
    simd::theta_series_scalar(table, z, a);
    simd::theta_series_avx2(table, z, b);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-14 * std::max(1.0, std::abs(a[i])));
  }

  // Switching the dispatch changes nothing observable.
  const simd::Isa before = simd::active_isa();
  const Theta3 th(Modulus(cplx(0.1, 0.8)));
  std::vector<cplx> z{cplx(0.3, 0.1), cplx(-1.2, 0.7), cplx(2.5, -0.3)};
  std::vector<cplx> s(z.size());
  std::vector<cplx> v(z.size());
  REQUIRE(simd::set_active_isa(simd::Isa::scalar));
  th.evaluate(z, s);
  REQUIRE(simd::set_active_isa(simd::Isa::avx2));
  CHECK(simd::active_isa() == simd::Isa::avx2);
  th.evaluate(z, v);
  simd::set_active_isa(before);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::abs(s[i] - v[i]) <= 1e-14 * std::abs(s[i]));
#endif
}
