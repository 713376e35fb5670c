#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdio>
#include <string>

#include "torus_rh/error.hpp"

namespace torus_rh::quad {

struct Result {
  cplx value;
  double error = 0.0;
};

struct Options {
  double rel_tol = 1e-14;
  unsigned max_depth = 12;
  // Accept when the error estimate is below max(accept_rel * L1, accept_abs).
  double accept_rel = 1e-11;
  double accept_abs = 1e-300;
};

inline std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Adaptive 15-point Gauss–Kronrod on [lo, hi] for complex-valued f(double).
template <class F>
Result integrate(F&& f, double lo, double hi, const Options& opt = {}) {
  double err = 0.0;
  double l1 = 0.0;
  const cplx value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, lo, hi, opt.max_depth, opt.rel_tol, &err, &l1);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()) || !std::isfinite(err) ||
      err > std::max(opt.accept_rel * l1, opt.accept_abs)) {
    throw Error(ErrorKind::quadrature_failure,
                "error estimate " + fmt_g(err) + " above tolerance (L1 " + fmt_g(l1) + ")");
  }
  return {value, err};
}

// ∫_0^1 g(s, 1-s) ds for g with at most inverse-square-root singularities at
// both ends, via s = 3t² - 2t³ (ds = 6t(1-t) dt). g receives 1-s computed
// without cancellation so that points next to the upper end stay distinct.
template <class G>
Result integrate_unit_both_ends(G&& g, const Options& opt = {}) {
  auto h = [&g](double t) -> cplx {
    const double s = t * t * (3.0 - 2.0 * t);
    const double u = 1.0 - t;
    const double sc = u * u * (1.0 + 2.0 * t);
    return g(s, sc) * (6.0 * t * u);
  };
  return integrate(h, 0.0, 1.0, opt);
}

// ∫_0^1 g(s) ds for g with an inverse-square-root singularity at s = 0, via s = t².
template <class G>
Result integrate_unit_start(G&& g, const Options& opt = {}) {
  auto h = [&g](double t) -> cplx { return g(t * t) * (2.0 * t); };
  return integrate(h, 0.0, 1.0, opt);
}

}  // namespace torus_rh::quad
