// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "waistlab/errors.hpp"

namespace waistlab {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_depth = 48;
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1, 1].  Abscissae and weights from the
// QUADPACK qk15 tables, symmetric half only.
inline constexpr double kGK15Nodes[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};

inline constexpr double kKronrodWeights[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};

inline constexpr double kGaussWeights[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

template <class F>
std::pair<double, double> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double kronrod = kKronrodWeights[7] * f(c);
  double gauss = kGaussWeights[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kGK15Nodes[i];
    const double fsum = f(c - dx) + f(c + dx);
    kronrod += kKronrodWeights[i] * fsum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
  }
  return {kronrod * h, gauss * h};
}

template <class F>
double adapt(F& f, double a, double b, double abs_tol, double rel_tol,
             int depth, int max_depth) {
  auto [kron, gauss] = gk15(f, a, b);
  if (!std::isfinite(kron))
    throw NumericError("quadrature: integrand produced a non-finite value");
  const double err = std::fabs(kron - gauss);
  if (err <= std::max(abs_tol, rel_tol * std::fabs(kron)) || depth >= max_depth)
    return kron;
  const double m = 0.5 * (a + b);
  return adapt(f, a, m, 0.5 * abs_tol, rel_tol, depth + 1, max_depth) +
         adapt(f, m, b, 0.5 * abs_tol, rel_tol, depth + 1, max_depth);
}

}  // namespace detail

//! Adaptive integral of f over [a, b].  Bisects until the Kronrod-Gauss
//! discrepancy of each panel meets the (locally split) tolerance.
template <class F>
double integrate(F&& f, double a, double b, QuadratureOptions opt = {}) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  return sign * detail::adapt(f, a, b, opt.abs_tol, opt.rel_tol, 0, opt.max_depth);
}

//! Integral of f over [a, +inf) via the rational substitution
//! x = a + t/(1-t).  Suitable for integrands with at least 1/x^2 decay.
template <class F>
double integrate_half_line(F&& f, double a, QuadratureOptions opt = {}) {
  auto g = [&f, a](double t) {
    const double om = 1.0 - t;
    return f(a + t / om) / (om * om);
  };
  return detail::adapt(g, 0.0, 1.0, opt.abs_tol, opt.rel_tol, 0, opt.max_depth);
}

}  // namespace waistlab
