// SPDX-License-Identifier: Apache-2.0
#include "waistlab/rot_surface.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>

#include "waistlab/errors.hpp"
#include "waistlab/model_geometry.hpp"

namespace waistlab {

namespace {

constexpr double kPoleTol = 1e-13;

// Dormand-Prince 5(4) pair.
struct Dp45 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695,
                          e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                          e6 = 187.0 / 2100, e7 = 1.0 / 40;
};

using State = Eigen::Vector3d;  // (r, theta, vr)

//! Integrates the geodesic system r' = vr, theta' = L/h^2,
//! vr' = h'(r) L^2 / h(r)^3 from t = 0 to t = T.
State integrate_geodesic(const RotSymSurface& surf, State y, double L, double T,
                         const GeodesicOptions& opt) {
  auto rhs = [&surf, L](const State& s) -> State {
    const double h = surf.profile(s[0]);
    const double dh = surf.profile_d(s[0]);
    const double inv_h2 = 1.0 / (h * h);
    return {s[2], L * inv_h2, dh * L * L * inv_h2 / h};
  };

  double t = 0.0;
  double dt = std::min(opt.init_step, T);
  State k1 = rhs(y);
  for (int step = 0; step < opt.max_steps; ++step) {
    if (t >= T) return y;
    dt = std::min(dt, T - t);

    const State k2 = rhs(y + dt * (Dp45::a21 * k1));
    const State k3 = rhs(y + dt * (Dp45::a31 * k1 + Dp45::a32 * k2));
    const State k4 = rhs(y + dt * (Dp45::a41 * k1 + Dp45::a42 * k2 + Dp45::a43 * k3));
    const State k5 = rhs(y + dt * (Dp45::a51 * k1 + Dp45::a52 * k2 +
                                   Dp45::a53 * k3 + Dp45::a54 * k4));
    const State k6 = rhs(y + dt * (Dp45::a61 * k1 + Dp45::a62 * k2 +
                                   Dp45::a63 * k3 + Dp45::a64 * k4 + Dp45::a65 * k5));
    const State y5 = y + dt * (Dp45::b1 * k1 + Dp45::b3 * k3 + Dp45::b4 * k4 +
                               Dp45::b5 * k5 + Dp45::b6 * k6);
    const State k7 = rhs(y5);
    const State y4 = y + dt * (Dp45::e1 * k1 + Dp45::e3 * k3 + Dp45::e4 * k4 +
                               Dp45::e5 * k5 + Dp45::e6 * k6 + Dp45::e7 * k7);

    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double scale =
          opt.abs_tol + opt.rel_tol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
      err = std::max(err, std::fabs(y5[i] - y4[i]) / scale);
    }

    if (err <= 1.0) {
      t += dt;
      y = y5;
      k1 = k7;  // first-same-as-last
      if (y[0] <= kPoleTol)
        throw NumericError("geodesic integration collapsed onto the pole");
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
    dt *= fac;
  }
  throw NumericError("geodesic integration exceeded the step budget");
}

Eigen::Vector2d rot90(const Eigen::Vector2d& u) { return {-u[1], u[0]}; }

}  // namespace

RotSymSurface::RotSymSurface(std::string name, Profile h, Profile dh, Profile d2h,
                             double max_radius)
    : name_(std::move(name)),
      h_(std::move(h)),
      dh_(std::move(dh)),
      d2h_(std::move(d2h)),
      max_radius_(max_radius) {
  if (!(max_radius_ > 0)) throw ValidationError("surface needs max_radius > 0");
  if (std::fabs(h_(1e-8) - 1e-8) > 1e-12 || std::fabs(dh_(0.0) - 1.0) > 1e-9)
    throw ValidationError("profile must satisfy h(0) = 0, h'(0) = 1");
}

RotSymSurface::RotSymSurface(std::string name, Profile h, double max_radius)
    : RotSymSurface(
          std::move(name), h,
          [h](double r) {
            const double e = 1e-6 * std::max(1.0, std::fabs(r));
            return (h(r + e) - h(r - e)) / (2 * e);
          },
          [h](double r) {
            const double e = 1e-4 * std::max(1.0, std::fabs(r));
            return (h(r + e) - 2 * h(r) + h(r - e)) / (e * e);
          },
          max_radius) {}

double RotSymSurface::gauss_curvature(double r) const {
  if (!(r > 0) || r > max_radius_)
    throw DomainError("gauss_curvature: r must lie in (0, max_radius]");
  return -d2h_(r) / h_(r);
}

RotSymSurface model_surface(double kappa, double max_radius) {
  return RotSymSurface(
      "model", [kappa](double r) { return sn(kappa, r); },
      [kappa](double r) { return cs(kappa, r); },
      [kappa](double r) { return -kappa * sn(kappa, r); }, max_radius);
}

Eigen::Vector2d exp_map(const RotSymSurface& surf, const Eigen::Vector2d& base,
                        const Eigen::Vector2d& v, const GeodesicOptions& opt) {
  const double r0 = base.norm();
  if (r0 > surf.max_radius())
    throw DomainError("exp_map: base lies outside the chart");
  const double speed = v.norm();
  if (speed < kPoleTol) return base;

  if (r0 < kPoleTol) {
    // normal coordinates at the pole: exp_0(v) = v
    if (speed > surf.max_radius())
      throw DomainError("exp_map: geodesic leaves the chart");
    return v;
  }

  const Eigen::Vector2d er = base / r0;
  const double vr = v.dot(er);
  const double vt = v.dot(rot90(er));
  const double theta0 = std::atan2(base[1], base[0]);

  if (std::fabs(vt) < kPoleTol * speed) {
    // meridian geodesic: a straight line through the pole in the chart
    const double rf = r0 + vr;
    if (std::fabs(rf) > surf.max_radius())
      throw DomainError("exp_map: geodesic leaves the chart");
    return rf * er;  // rf < 0 lands on the opposite meridian
  }

  const double L = vt * surf.profile(r0);
  State y{r0, theta0, vr};
  y = integrate_geodesic(surf, y, L, 1.0, opt);
  if (y[0] > surf.max_radius())
    throw DomainError("exp_map: geodesic leaves the chart");
  return {y[0] * std::cos(y[1]), y[0] * std::sin(y[1])};
}

Eigen::Vector2d log_map(const RotSymSurface& surf, const Eigen::Vector2d& base,
                        const Eigen::Vector2d& target, const GeodesicOptions& opt) {
  const double scale = 1.0 + target.norm();
  if ((target - base).norm() < kPoleTol) return Eigen::Vector2d::Zero();
  if (base.norm() < kPoleTol) return target;  // normal coordinates at the pole

  Eigen::Vector2d v = target - base;
  Eigen::Vector2d res = exp_map(surf, base, v, opt) - target;
  double rnorm = res.norm();
  const double tol = 1e-10 * scale;

  for (int iter = 0; iter < 80 && rnorm > tol; ++iter) {
    const double fd = 1e-7 * (1.0 + v.norm());
    Eigen::Matrix2d J;
    for (int j = 0; j < 2; ++j) {
      Eigen::Vector2d vp = v;
      vp[j] += fd;
      J.col(j) = (exp_map(surf, base, vp, opt) - target - res) / fd;
    }
    const Eigen::Vector2d step = J.fullPivLu().solve(-res);
    double lambda = 1.0;
    for (int back = 0; back < 30; ++back) {
      const Eigen::Vector2d v_try = v + lambda * step;
      const Eigen::Vector2d res_try = exp_map(surf, base, v_try, opt) - target;
      if (res_try.norm() < rnorm) {
        v = v_try;
        res = res_try;
        rnorm = res.norm();
        break;
      }
      lambda *= 0.5;
      if (back == 29)
        throw NumericError("log_map: line search stalled");
    }
  }
  if (rnorm > 1e-8 * scale)
    throw NumericError("log_map: shooting did not reach the target");
  return v;
}

double surface_distance(const RotSymSurface& surf, const Eigen::Vector2d& p,
                        const Eigen::Vector2d& q, const GeodesicOptions& opt) {
  return log_map(surf, p, q, opt).norm();
}

CurvatureCheck check_curvature_bound(const RotSymSurface& surf, double bound,
                                     double r_lo, double r_hi, int n_grid,
                                     double tol) {
  if (!(r_hi > r_lo) || n_grid < 2)
    throw ValidationError("check_curvature_bound: bad grid");
  CurvatureCheck out;
  out.worst_excess = -kInf;
  for (int i = 1; i <= n_grid; ++i) {
    const double r = r_lo + (r_hi - r_lo) * static_cast<double>(i) / n_grid;
    const double excess = surf.gauss_curvature(r) - bound;
    if (excess > out.worst_excess) {
      out.worst_excess = excess;
      out.worst_radius = r;
    }
  }
  out.ok = out.worst_excess <= tol;
  return out;
}

}  // namespace waistlab
