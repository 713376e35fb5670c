#include "torus_rh/theta.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace torus_rh {

namespace {

constexpr double pi = std::numbers::pi;
// exp() of anything larger overflows a double.
constexpr double max_log_factor = 700.0;

cplx shift_exponent(cplx z0, cplx tau, long l) {
  const double ld = static_cast<double>(l);
  return cplx(0.0, -pi) * tau * ld * ld - cplx(0.0, 2.0 * pi) * ld * z0;
}

}  // namespace

Modulus::Modulus(cplx tau) : tau_(tau) {
  if (!(tau.imag() > 0.0) || !std::isfinite(tau.imag()) || !std::isfinite(tau.real())) {
    throw Error(ErrorKind::nonconvergent_modulus, "theta series requires Im(tau) > 0");
  }
}

ThetaReduction reduce_theta_argument(cplx z, const Modulus& tau) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorKind::invalid_argument, "theta argument is not finite");
  }
  const double lr = std::round(z.imag() / tau.imag());
  const double limit = 1e15;
  if (std::abs(lr) > limit) {
    throw Error(ErrorKind::overflow, "Im(z) too large for lattice reduction");
  }
  const cplx z1 = z - lr * tau.value();
  const double nr = std::round(z1.real());
  return {z1 - nr, static_cast<long>(nr), static_cast<long>(lr)};
}

Theta3::Theta3(Modulus tau, ThetaOptions options)
    : tau_(tau), options_(options), table_(simd::make_series_table(tau.value())) {
  if (table_.tail_bound > options_.tolerance) {
    throw Error(ErrorKind::nonconvergent_modulus, "series tail bound exceeds tolerance");
  }
}

ThetaValue Theta3::evaluate(cplx z) const {
  const ThetaReduction red = reduce_theta_argument(z, tau_);
  cplx series;
  simd::theta_series_scalar(table_, std::span<const cplx>(&red.z0, 1), std::span<cplx>(&series, 1));
  if (red.l == 0) return {series, table_.tail_bound};
  const cplx expo = shift_exponent(red.z0, tau_.value(), red.l);
  if (expo.real() > max_log_factor) {
    throw Error(ErrorKind::overflow, "theta shift factor overflows");
  }
  return {series * std::exp(expo), table_.tail_bound};
}

void Theta3::evaluate(std::span<const cplx> z, std::span<cplx> out) const {
  if (out.size() < z.size()) {
    throw Error(ErrorKind::invalid_argument, "theta batch output too small");
  }
  std::vector<ThetaReduction> red;
  red.reserve(z.size());
  std::vector<cplx> z0(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    red.push_back(reduce_theta_argument(z[i], tau_));
    z0[i] = red.back().z0;
  }
  simd::theta_series(table_, z0, out.first(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (red[i].l == 0) continue;
    const cplx expo = shift_exponent(red[i].z0, tau_.value(), red[i].l);
    if (expo.real() > max_log_factor) {
      throw Error(ErrorKind::overflow, "theta shift factor overflows");
    }
    out[i] *= std::exp(expo);
  }
}

ThetaValue theta3(cplx z, const Modulus& tau, ThetaOptions options) {
  return Theta3(tau, options).evaluate(z);
}

cplx theta3_shift_factor(cplx z, const Modulus& tau, long /*n*/, long l) {
  const cplx expo = shift_exponent(z, tau.value(), l);
  if (expo.real() > max_log_factor) {
    throw Error(ErrorKind::overflow, "theta shift factor overflows");
  }
  return std::exp(expo);
}

double theta3_double_modulus_identity_residual(cplx z, const Modulus& tau) {
  const Theta3 th(tau);
  const Theta3 th2(Modulus(2.0 * tau.value()));
  const cplx lhs = th(z) * th(z + 0.5);
  const cplx rhs = th2(2.0 * z + 0.5) * th2(cplx(0.5, 0.0));
  return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

}  // namespace torus_rh
